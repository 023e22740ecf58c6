use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rsoire::gen::{characteristic_sample, random_rsoire};
use rsoire::*;

fn main() {
    // in-class stress across seeds
    for seed in [1u64, 2, 3, 99, 123456] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut bad, mut stuck) = (0, 0);
        for round in 0..300 {
            let n = 2 + (round % 7);
            let symbols: Vec<Symbol> = (0..n).map(|i| Symbol::new(&format!("s{i}")).unwrap()).collect();
            let target = random_rsoire(&mut rng, &symbols, 4);
            let max_len = target.alphabet().len() + 2;
            let s = characteristic_sample(&target, max_len, 5000, 1_000_000).unwrap();
            match learn(&s) {
                Ok(r) => {
                    if r.classification != SoClass::Rsoire || !s.words().iter().all(|w| matches(&r.expression, w)) {
                        bad += 1;
                        println!("BAD seed={seed} target={target} learnt={}", r.expression);
                    }
                }
                Err(Error::Stuck { .. }) => { stuck += 1; println!("STUCK seed={seed} target={target}"); }
                Err(e) => println!("ERR {e}"),
            }
        }
        println!("seed {seed}: bad={bad} stuck={stuck}");
    }
    // adversarial random-word samples: soundness must hold whenever learning succeeds
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let (mut ok, mut stuck, mut unsound) = (0, 0, 0);
    for _ in 0..600 {
        let n_words = rng.gen_range(1..8);
        let n_syms = rng.gen_range(1..5usize);
        let words: Vec<Word> = (0..n_words).map(|_| {
            let len = rng.gen_range(0..7);
            Word::new((0..len).map(|_| Symbol::new(&format!("t{}", rng.gen_range(0..n_syms))).unwrap()).collect())
        }).collect();
        let s = Sample::new(words);
        match learn(&s) {
            Ok(r) => {
                ok += 1;
                if !s.words().iter().all(|w| matches(&r.expression, w)) {
                    unsound += 1;
                    println!("UNSOUND words={:?} learnt={}", s.words().iter().map(|w| w.to_string()).collect::<Vec<_>>(), r.expression);
                }
            }
            Err(Error::Stuck { .. }) => stuck += 1,
            Err(e) => println!("ERR {e}"),
        }
    }
    println!("adversarial: ok={ok} stuck={stuck} unsound={unsound}");
}
