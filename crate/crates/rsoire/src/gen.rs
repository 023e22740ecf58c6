//! Sampling support: random in-class expressions for round-trip testing and
//! characteristic word samples drawn by bounded enumeration.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::expr::{Expr, Symbol};
use crate::lang::Enumerator;
use crate::lang::Word;
use crate::soa::Sample;

/// Generates a random expression from the restricted class over the given
/// symbols, using each symbol at most once. The nesting depth is bounded by
/// `max_depth`; unary operators never stack directly.
pub fn random_rsoire<R: Rng>(rng: &mut R, symbols: &[Symbol], max_depth: usize) -> Expr {
    let mut pool: Vec<Symbol> = symbols.to_vec();
    pool.shuffle(rng);
    gen_p(rng, &pool, max_depth)
}

fn split<'a, R: Rng>(rng: &mut R, pool: &'a [Symbol], parts: usize) -> Vec<&'a [Symbol]> {
    // Contiguous split into non-empty parts; the pool is pre-shuffled.
    debug_assert!(parts >= 2 && pool.len() >= parts);
    let mut cuts: Vec<usize> = Vec::with_capacity(parts + 1);
    cuts.push(0);
    let mut candidates: Vec<usize> = (1..pool.len()).collect();
    candidates.shuffle(rng);
    cuts.extend(candidates.into_iter().take(parts - 1));
    cuts.push(pool.len());
    cuts.sort_unstable();
    cuts.windows(2).map(|w| &pool[w[0]..w[1]]).collect()
}

fn gen_p<R: Rng>(rng: &mut R, pool: &[Symbol], depth: usize) -> Expr {
    if pool.len() < 2 || depth == 0 {
        return gen_t(rng, pool, depth);
    }
    match rng.gen_range(0..4) {
        0 => gen_s(rng, pool, depth - 1),
        1 | 2 => {
            // Concatenation with exactly one ambient-level factor.
            let k = 2 + usize::from(pool.len() > 2 && rng.gen_bool(0.4));
            let parts = split(rng, pool, k);
            let p_at = rng.gen_range(0..parts.len());
            Expr::concat(
                parts
                    .iter()
                    .enumerate()
                    .map(|(i, part)| {
                        if i == p_at {
                            gen_p(rng, part, depth - 1)
                        } else {
                            gen_s(rng, part, depth - 1)
                        }
                    })
                    .collect(),
            )
        }
        _ => {
            let parts = split(rng, pool, 2);
            Expr::alt(vec![
                gen_p(rng, parts[0], depth - 1),
                gen_s(rng, parts[1], depth - 1),
            ])
        }
    }
}

fn gen_s<R: Rng>(rng: &mut R, pool: &[Symbol], depth: usize) -> Expr {
    if pool.len() < 2 || depth == 0 || rng.gen_bool(0.4) {
        return gen_t(rng, pool, depth);
    }
    let k = 2 + usize::from(pool.len() > 2 && rng.gen_bool(0.3));
    let parts = split(rng, pool, k);
    Expr::inter(
        parts
            .iter()
            .map(|part| gen_s(rng, part, depth.saturating_sub(1)))
            .collect(),
    )
}

fn gen_t<R: Rng>(rng: &mut R, pool: &[Symbol], depth: usize) -> Expr {
    match pool {
        [] => Expr::Epsilon,
        [s] => leaf(rng, s),
        _ if depth == 0 => Expr::concat(pool.iter().map(|s| leaf(rng, s)).collect()),
        _ => {
            let parts = split(rng, pool, 2);
            let children: Vec<Expr> = parts
                .iter()
                .map(|part| gen_t(rng, part, depth - 1))
                .collect();
            if rng.gen_bool(0.5) {
                Expr::concat(children)
            } else if rng.gen_bool(0.25) {
                let mut children = children;
                children.push(Expr::Epsilon);
                Expr::alt(children)
            } else {
                Expr::alt(children)
            }
        }
    }
}

fn leaf<R: Rng>(rng: &mut R, s: &Symbol) -> Expr {
    let e = Expr::Sym(s.clone());
    match rng.gen_range(0..10) {
        0 | 1 => Expr::star(e),
        2 | 3 => Expr::plus(e),
        4 => Expr::opt(e),
        _ => e,
    }
}

/// Draws the characteristic sample of an expression: its bounded language up
/// to `max_len`, truncated to the first `max_words` words in
/// length-lexicographic order. Levels are enumerated lazily, so truncation
/// does not pay for words it discards. Errors if the truncation would drop
/// words of length at most two.
pub fn characteristic_sample(
    e: &Expr,
    max_len: usize,
    max_words: usize,
    cap: usize,
) -> Result<Sample> {
    let mut en = Enumerator::new(e, cap);
    let mut words: Vec<Word> = Vec::new();
    let short_len = max_len.min(2);
    let mut short = 0usize;
    for len in 0..=max_len {
        let level = en.level(len)?;
        if len <= short_len {
            short += level.len();
        }
        words.extend(level.iter().cloned());
        if len >= short_len && words.len() >= max_words {
            break;
        }
    }
    if short > max_words {
        return Err(Error::SampleCap { cap: max_words });
    }
    words.truncate(max_words);
    Ok(Sample::new(words))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, SoClass};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn alphabet(n: usize) -> Vec<Symbol> {
        (0..n)
            .map(|i| Symbol::new(&format!("s{i}")).unwrap())
            .collect()
    }

    #[test]
    fn generated_expressions_are_in_class() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for round in 0..500 {
            let n = 2 + (round % 7);
            let e = random_rsoire(&mut rng, &alphabet(n), 4);
            assert_eq!(e.classify(), SoClass::Rsoire, "out of class: {e}");
        }
    }

    #[test]
    fn characteristic_sample_is_ordered_and_truncated() {
        let e = parse("(a|b)*").unwrap();
        let s = characteristic_sample(&e, 4, 10, 1_000_000).unwrap();
        assert_eq!(s.words().len(), 10);
        let mut sorted = s.words().to_vec();
        sorted.sort();
        assert_eq!(s.words(), &sorted[..], "sample is length-lex ordered");
        // Equals the truncated full enumeration.
        let full = crate::lang::enumerate(&e, 4).unwrap();
        let want: Vec<Word> = full.words.into_iter().take(10).collect();
        assert_eq!(s.words(), &want[..]);
    }

    #[test]
    fn characteristic_sample_guards_short_word_coverage() {
        // 37 words of length <= 2 cannot fit a 10-word budget.
        let syms: Vec<String> = (0..6).map(|i| format!("x{i}")).collect();
        let expr = parse(&format!("({})*", syms.join("|"))).unwrap();
        assert_eq!(
            characteristic_sample(&expr, 5, 10, 1_000_000),
            Err(Error::SampleCap { cap: 10 })
        );
    }

    #[test]
    fn big_star_languages_sample_without_blowup() {
        // The full language to length 10 has ~10^9 words; lazy levels stop
        // as soon as the word budget is covered.
        let syms: Vec<String> = (0..8).map(|i| format!("x{i}")).collect();
        let expr = parse(&format!("({})*", syms.join("|"))).unwrap();
        let s = characteristic_sample(&expr, 10, 5000, 1_000_000).unwrap();
        assert_eq!(s.words().len(), 5000);
    }
}
