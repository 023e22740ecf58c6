use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rsoire::gen::{characteristic_sample, random_rsoire};
use rsoire::*;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut stuck = 0;
    let mut not_rsoire = 0;
    let mut unsound = 0;
    let mut sample_err = 0;
    let mut ok = 0;
    for round in 0..400 {
        let n = 2 + (round % 7);
        let symbols: Vec<Symbol> = (0..n)
            .map(|i| Symbol::new(&format!("s{i}")).unwrap())
            .collect();
        let target = random_rsoire(&mut rng, &symbols, 4);
        let max_len = target.alphabet().len() + 2;
        let s = match characteristic_sample(&target, max_len, 5000, 1_000_000) {
            Ok(s) => s,
            Err(e) => { sample_err += 1; println!("SAMPLE ERR {target}: {e}"); continue; }
        };
        match learn(&s) {
            Ok(r) => {
                if r.classification != SoClass::Rsoire {
                    not_rsoire += 1;
                    println!("NOT-RSOIRE target={target} learnt={} class={}", r.expression, r.classification);
                }
                if !s.words().iter().all(|w| matches(&r.expression, w)) {
                    unsound += 1;
                    println!("UNSOUND target={target} learnt={}", r.expression);
                }
                if !r.expression.repetition_on_symbols_only() {
                    println!("COMPOSITE-REP target={target} learnt={}", r.expression);
                }
                ok += 1;
            }
            Err(Error::Stuck { .. }) => { stuck += 1; println!("STUCK target={target}"); }
            Err(e) => println!("ERR target={target}: {e}"),
        }
    }
    println!("ok={ok} stuck={stuck} not_rsoire={not_rsoire} unsound={unsound} sample_err={sample_err}");
}
