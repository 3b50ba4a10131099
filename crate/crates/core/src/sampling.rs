//! Seeded random inputs for the randomized checks: equal pairs of words
//! over a spanning set, signed words equal to 1, and pairs of signed words
//! related by rewriting.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::congruence::{Element, MonoidContext};
use crate::normal::SignedElement;
use crate::presentation::{SignedLetter, SignedWord, Word};
use crate::structure::ElementSet;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Non-identity members of S whose product has at most `max_norm` letters.
pub fn random_s_sequence<R: Rng>(s: &ElementSet, max_norm: usize, rng: &mut R) -> Vec<Element> {
    let pool: Vec<&Element> = s.iter().filter(|x| !x.is_identity()).collect();
    let target = rng.gen_range(1..=max_norm);
    let mut out = Vec::new();
    let mut norm = 0;
    while norm < target {
        let fits: Vec<&&Element> = pool.iter().filter(|x| norm + x.norm() <= target).collect();
        let Some(x) = fits.choose(rng) else { break };
        norm += x.norm();
        out.push((**x).clone());
    }
    out
}

/// Cuts a word into consecutive pieces whose values lie in S.
fn random_chunking<R: Rng>(ctx: &MonoidContext, s: &ElementSet, w: &Word, rng: &mut R) -> Vec<Element> {
    let letters = w.letters();
    let mut out = Vec::new();
    let mut i = 0;
    while i < letters.len() {
        let options: Vec<Element> = (i + 1..=letters.len())
            .map(|j| ctx.canonical(&Word::new(letters[i..j].to_vec())))
            .filter(|x| s.contains(x))
            .collect();
        let x = options.choose(rng).expect("atoms lie in a spanning set").clone();
        i += x.norm();
        out.push(x);
    }
    out
}

/// Two sequences over S with the same product of at most `max_norm`
/// letters: a random sequence, and a random chunking of a random word
/// representing its product.
pub fn random_equal_pair<R: Rng>(
    ctx: &MonoidContext,
    s: &ElementSet,
    max_norm: usize,
    rng: &mut R,
) -> (Vec<Element>, Vec<Element>) {
    let u = random_s_sequence(s, max_norm, rng);
    let x = ctx.product(&u);
    let class = ctx.congruence_class(x.canon());
    let w = class.choose(rng).expect("classes are non-empty").clone();
    let v = random_chunking(ctx, s, &w, rng);
    (u, v)
}

/// A signed word over S equal to 1: `u·v⁻¹` for an equal pair, rotated
/// cyclically. Its length is at most `max_len`.
pub fn random_identity_word<R: Rng>(
    ctx: &MonoidContext,
    s: &ElementSet,
    max_len: usize,
    rng: &mut R,
) -> Vec<SignedElement> {
    loop {
        let (u, v) = random_equal_pair(ctx, s, max_len / 2, rng);
        if u.len() + v.len() > max_len {
            continue;
        }
        let mut w: Vec<SignedElement> = u.into_iter().map(|x| (x, false)).collect();
        w.extend(v.into_iter().rev().map(|x| (x, true)));
        let r = rng.gen_range(0..w.len());
        w.rotate_left(r);
        return w;
    }
}

pub fn random_signed_word<R: Rng>(rank: usize, len: usize, rng: &mut R) -> SignedWord {
    SignedWord(
        (0..len)
            .map(|_| SignedLetter {
                generator: rng.gen_range(0..rank) as u8,
                inverse: rng.gen_bool(0.5),
            })
            .collect(),
    )
}

/// Applies `steps` random moves that preserve the group element: a relation
/// applied to a positive or a negative factor, or insertion or deletion of
/// a cancelling pair.
pub fn random_rewrite<R: Rng>(ctx: &MonoidContext, w: &SignedWord, steps: usize, rng: &mut R) -> SignedWord {
    let rels = ctx.presentation().relations();
    let rank = ctx.rank();
    let mut cur = w.0.clone();
    for _ in 0..steps {
        match rng.gen_range(0..3) {
            0 if !rels.is_empty() => {
                let r = &rels[rng.gen_range(0..rels.len())];
                let (from, to) = if rng.gen_bool(0.5) { (&r.lhs, &r.rhs) } else { (&r.rhs, &r.lhs) };
                let inverse = rng.gen_bool(0.5);
                let pattern: Vec<SignedLetter> = if inverse {
                    from.letters().iter().rev().map(|&g| SignedLetter { generator: g, inverse: true }).collect()
                } else {
                    from.letters().iter().map(|&g| SignedLetter { generator: g, inverse: false }).collect()
                };
                let repl: Vec<SignedLetter> = if inverse {
                    to.letters().iter().rev().map(|&g| SignedLetter { generator: g, inverse: true }).collect()
                } else {
                    to.letters().iter().map(|&g| SignedLetter { generator: g, inverse: false }).collect()
                };
                let hits: Vec<usize> = (0..=cur.len().saturating_sub(pattern.len()))
                    .filter(|&i| cur.len() >= pattern.len() && cur[i..i + pattern.len()] == pattern[..])
                    .collect();
                if let Some(&i) = hits.choose(rng) {
                    cur.splice(i..i + pattern.len(), repl);
                }
            }
            1 => {
                let g = rng.gen_range(0..rank) as u8;
                let first = rng.gen_bool(0.5);
                let i = rng.gen_range(0..=cur.len());
                cur.splice(
                    i..i,
                    [
                        SignedLetter { generator: g, inverse: first },
                        SignedLetter { generator: g, inverse: !first },
                    ],
                );
            }
            _ => {
                let hits: Vec<usize> = (0..cur.len().saturating_sub(1))
                    .filter(|&i| cur[i].generator == cur[i + 1].generator && cur[i].inverse != cur[i + 1].inverse)
                    .collect();
                if let Some(&i) = hits.choose(rng) {
                    cur.drain(i..i + 2);
                }
            }
        }
    }
    SignedWord(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::fixture;
    use crate::structure::primitive_closure;

    #[test]
    fn equal_pairs_are_equal() {
        let ctx = MonoidContext::new(fixture("M2").unwrap());
        let s = primitive_closure(&ctx, 100, 6).unwrap().set;
        let mut r = rng(7);
        for _ in 0..50 {
            let (u, v) = random_equal_pair(&ctx, &s, 8, &mut r);
            assert_eq!(ctx.product(&u), ctx.product(&v));
            assert!(u.iter().chain(&v).all(|x| s.contains(x)));
            assert!(u.iter().map(Element::norm).sum::<usize>() <= 8);
        }
    }

    #[test]
    fn identity_words_have_balanced_norm() {
        let ctx = MonoidContext::new(fixture("M1").unwrap());
        let s = primitive_closure(&ctx, 100, 6).unwrap().set;
        let mut r = rng(1);
        for _ in 0..50 {
            let w = random_identity_word(&ctx, &s, 10, &mut r);
            assert!(!w.is_empty() && w.len() <= 10);
            let pos: usize = w.iter().filter(|(_, i)| !i).map(|(x, _)| x.norm()).sum();
            let neg: usize = w.iter().filter(|(_, i)| *i).map(|(x, _)| x.norm()).sum();
            assert_eq!(pos, neg);
        }
    }

    #[test]
    fn seeded_runs_repeat() {
        let a = random_signed_word(3, 6, &mut rng(42));
        let b = random_signed_word(3, 6, &mut rng(42));
        assert_eq!(a, b);
    }
}
