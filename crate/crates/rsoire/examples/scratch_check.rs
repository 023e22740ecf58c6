use rsoire::*;
use rsoire::gen::characteristic_sample;

fn check(target: &str) {
    let e = parse(target).unwrap();
    let n = e.alphabet().len() + 2;
    let s = characteristic_sample(&e, n, 5000, 1_000_000).unwrap();
    match learn(&s) {
        Ok(r) => {
            let eq = bounded_equiv(&r.expression, &e, n).unwrap();
            let sound = s.words().iter().all(|w| matches(&r.expression, w));
            println!("{target:32} | sample {:5} | learnt {:24} | class {:9} | rep-ok {} | sound {} | {:?}",
                s.words().len(), r.expression.to_string(), r.classification.to_string(),
                r.expression.repetition_on_symbols_only(), sound, eq);
        }
        Err(e) => println!("{target:32} | ERROR {e}"),
    }
}

fn main() {
    // round-trip targets
    for t in ["(a+|b) (c&d)", "a d&(b|c*)", "a+|b+&c*"] { check(t); }
    println!("---");
    // divergence targets
    for t in ["(a b)+", "(a|b)+", "(a|b&c)+", "(a&b)+", "((a|b)&(c|d)&(e|f))*"] { check(t); }
    println!("---");
    check("a&b (c&d)");
}
