mod common;

use std::collections::BTreeSet;

use common::{Naive, W};
use thinfrac_core::automaton::{build_automaton, GrowthMode};
use thinfrac_core::garside::build_structure;
use thinfrac_core::presentation::SignedWord;
use thinfrac_core::sampling::{random_rewrite, random_signed_word, rng};
use thinfrac_core::structure::{enumerate_simples, mcms, primitive_closure};
use thinfrac_core::{fixture, Element, MonoidContext};

const FIXTURES: [&str; 4] = ["M1", "M2", "M3", "B3"];

fn setup(name: &str) -> (MonoidContext, Naive) {
    let p = fixture(name).unwrap();
    (MonoidContext::new(p.clone()), Naive::new(&p))
}

fn words(set: impl IntoIterator<Item = Element>) -> BTreeSet<W> {
    set.into_iter().map(|x| x.canon().letters().to_vec()).collect()
}

fn el(ctx: &MonoidContext, w: &[u8]) -> Element {
    ctx.canonical(&thinfrac_core::Word::new(w.to_vec()))
}

#[test]
fn ball_matches_naive() {
    for name in FIXTURES {
        let (ctx, naive) = setup(name);
        let lib = words(ctx.enumerate_ball(5).unwrap());
        let brute: BTreeSet<W> = naive.ball(5).into_iter().collect();
        assert_eq!(lib, brute, "{name}");
    }
}

#[test]
fn divisors_match_naive() {
    for name in FIXTURES {
        let (ctx, naive) = setup(name);
        for x in ctx.enumerate_ball(4).unwrap() {
            let w = x.canon().letters();
            assert_eq!(words(ctx.divisors(&x).iter().cloned()), naive.divisors(w), "{name}");
            assert_eq!(words(ctx.right_divisors(&x).iter().cloned()), naive.right_divisors(w), "{name}");
        }
    }
}

#[test]
fn mcms_match_naive() {
    for name in FIXTURES {
        let (ctx, naive) = setup(name);
        let ball = ctx.enumerate_ball(2).unwrap();
        for x in &ball {
            for y in &ball {
                let r = mcms(&ctx, x, y, 7).unwrap();
                let lib = words(r.mcms.iter().cloned());
                let brute = naive.mcms(x.canon().letters(), y.canon().letters(), 7);
                assert_eq!(lib, brute, "{name}: {} {}", ctx.render(x), ctx.render(y));
            }
        }
    }
}

#[test]
fn primitive_closure_and_simples_match_naive() {
    for name in FIXTURES {
        let (ctx, naive) = setup(name);
        let p = primitive_closure(&ctx, 100, 6).unwrap();
        let brute = naive.primitive_closure(6);
        assert_eq!(words(p.set.iter().cloned()), brute, "{name}");
        assert!(naive.spans(&brute, 5), "{name}");
        let simples = enumerate_simples(&ctx, &p.set).unwrap();
        assert!(simples.max_norm() < 6, "{name}");
        assert_eq!(words(simples.iter().cloned()), naive.simples(&brute, 6), "{name}");
    }
}

#[test]
fn free_comm_simples_match_naive() {
    for n in 1..=3 {
        let (ctx, naive) = setup(&format!("free_comm({n})"));
        let p = primitive_closure(&ctx, 100, 4).unwrap();
        let brute = naive.primitive_closure(4);
        assert_eq!(words(p.set.iter().cloned()), brute);
        let simples = enumerate_simples(&ctx, &p.set).unwrap();
        assert_eq!(words(simples.iter().cloned()), naive.simples(&brute, n + 1));
    }
}

fn delta_for(name: &str) -> &'static str {
    match name {
        "M1" => "aa",
        "M2" => "ab",
        "M3" => "bb",
        _ => "s1s2s1",
    }
}

/// Products of brute-force normal sequences of length n: sequences of
/// non-identity Div(Δ)-simples that are prenormal by definition.
fn brute_normal_products(naive: &Naive, delta: &[u8], n: usize) -> (usize, BTreeSet<W>) {
    let div = naive.divisors(delta);
    let simples: Vec<W> = naive
        .simples(&div, 2 * delta.len())
        .into_iter()
        .filter(|x| !x.is_empty())
        .collect();
    let mut seqs: Vec<Vec<W>> = vec![Vec::new()];
    for _ in 0..n {
        seqs = seqs
            .into_iter()
            .flat_map(|s| {
                simples.iter().map(move |x| {
                    let mut t = s.clone();
                    t.push(x.clone());
                    t
                })
            })
            .filter(|s| naive.prenormal(s, &div))
            .collect();
    }
    let products = seqs.iter().map(|s| naive.rep(&s.concat())).collect();
    (seqs.len(), products)
}

#[test]
fn growth_matches_brute_force() {
    for name in ["M1", "M3", "B3"] {
        let (ctx, naive) = setup(name);
        let gs = build_structure(&ctx, &ctx.element(delta_for(name)).unwrap(), 6).unwrap();
        let a = build_automaton(&ctx, &gs);
        let g = a.growth(5, GrowthMode::Monoid, true).unwrap();
        let d = gs.delta.canon().letters().to_vec();
        for n in 0..=5 {
            let (sequences, products) = brute_normal_products(&naive, &d, n);
            assert_eq!(sequences, products.len(), "{name}: forms not unique at n={n}");
            assert_eq!(g.coefficients[n], products.len() as u64, "{name} n={n}");
        }
    }
}

#[test]
fn frozen_growth_prefixes() {
    let cases: [(&str, &str, Vec<u64>); 3] = [
        ("M1", "aa", vec![1, 4, 4, 4, 4, 4]),
        ("M3", "bb", vec![1, 6, 10, 14, 18, 22]),
        ("B3", "s1s2s1", vec![1, 5, 13, 29, 61, 125]),
    ];
    for (name, delta, expect) in cases {
        let (ctx, _) = setup(name);
        let gs = build_structure(&ctx, &ctx.element(delta).unwrap(), 6).unwrap();
        let g = build_automaton(&ctx, &gs).growth(5, GrowthMode::Monoid, true).unwrap();
        assert_eq!(g.coefficients, expect, "{name}");
        assert_eq!(g.recurrence_holds(), Some(true));
    }
}

#[test]
fn word_problem_matches_fraction_oracle() {
    for name in FIXTURES {
        let (ctx, naive) = setup(name);
        let gs = build_structure(&ctx, &ctx.element(delta_for(name)).unwrap(), 6).unwrap();
        let mut r = rng(11);
        for i in 0..60 {
            let w1 = random_signed_word(ctx.rank(), 1 + i % 5, &mut r);
            let w2 = if i % 2 == 0 {
                random_rewrite(&ctx, &w1, 4, &mut r)
            } else {
                random_signed_word(ctx.rank(), 1 + i % 5, &mut r)
            };
            assert_eq!(gs.group_equal(&ctx, &w1, &w2), naive.group_eq(&w1, &w2), "{name}");
        }
    }
}

#[test]
fn to_fraction_agrees_with_evaluation() {
    for name in FIXTURES {
        let (ctx, naive) = setup(name);
        let gs = build_structure(&ctx, &ctx.element(delta_for(name)).unwrap(), 6).unwrap();
        let ball = naive.ball(3);
        for num in &ball {
            for den in ball.iter().take(8) {
                let f = gs
                    .to_fraction(&ctx, &thinfrac_core::Word::new(num.clone()), &thinfrac_core::Word::new(den.clone()))
                    .unwrap();
                let mut sw = SignedWord::positive(&thinfrac_core::Word::new(num.clone()));
                sw = sw.concat(&SignedWord::positive(&thinfrac_core::Word::new(den.clone())).inverse());
                let g = gs.evaluate(&ctx, &sw);
                assert_eq!((f.k, f.tail.product(&ctx)), (g.k, g.x.clone()), "{name}");
                if f.k > 0 {
                    assert!(ctx.left_divides(&gs.delta, &el(&ctx, g.x.canon().letters())).is_none());
                }
            }
        }
    }
}
