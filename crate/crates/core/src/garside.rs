//! Garside elements: detection, the star map and automorphism φ, and the
//! group of fractions through the `Δ⁻ᵏx` form.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use crate::congruence::{Element, MonoidContext};
use crate::error::{Error, Result};
use crate::normal::{NormalSequence, Normalizer};
use crate::presentation::{SignedWord, Word};
use crate::report::{Report, Status};
use crate::structure::{is_spanning, mcms, pair_bound, primitive_closure, ElementSet};

/// Radius of the ball on which `build_structure` verifies `xΔ = Δφ(x)` and
/// the centrality of `Δᵉ`.
pub const VERIFY_RADIUS: usize = 3;

/// Checks that `Div(d)` contains the atoms, equals the set of right
/// divisors of `d`, and spans.
pub fn is_garside(ctx: &MonoidContext, d: &Element, bound: usize) -> Result<Report> {
    let left = ctx.divisors(d);
    if let Some(a) = ctx.atoms().into_iter().find(|a| !left.contains(a)) {
        return Ok(Report::new("is_garside", Status::Fail, bound, true)
            .with_witness(json!({"missing_atom": ctx.render(&a)})));
    }
    let right = ctx.right_divisors(d);
    if *left != *right {
        let odd = left.symmetric_difference(&right).next().expect("sets differ");
        return Ok(Report::new("is_garside", Status::Fail, bound, true)
            .with_witness(json!({"left_right_mismatch": ctx.render(odd)})));
    }
    let div = ElementSet::new(left.iter().cloned());
    let mut r = is_spanning(ctx, &div, bound)?;
    r.check = "is_garside".into();
    Ok(r)
}

/// The ⪯-minimal Garside elements up to a norm budget, plus the mcms of
/// the primitive elements found within the same budget, each marked with
/// whether it is Garside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GarsideSearch {
    pub max_norm: usize,
    pub minimal: Vec<Element>,
    pub primitive_mcms: Vec<(Element, bool)>,
}

impl GarsideSearch {
    pub fn to_json(&self, ctx: &MonoidContext) -> Value {
        json!({
            "max_norm": self.max_norm,
            "minimal": self.minimal.iter().map(|x| ctx.render(x)).collect::<Vec<_>>(),
            "primitive_mcms": self.primitive_mcms.iter().map(|(x, g)| json!({
                "element": ctx.render(x),
                "garside": g,
            })).collect::<Vec<_>>(),
        })
    }
}

pub fn find_minimal_garside(ctx: &MonoidContext, max_norm: usize, bound: usize) -> Result<GarsideSearch> {
    let ball = ctx.enumerate_ball(max_norm)?;
    let mut minimal: Vec<Element> = Vec::new();
    for x in ball.iter().filter(|x| !x.is_identity()) {
        if minimal.iter().any(|g| ctx.left_divides(g, x).is_some()) {
            continue;
        }
        if is_garside(ctx, x, bound)?.passed() {
            minimal.push(x.clone());
        }
    }

    let prim = primitive_closure(ctx, 1000, bound)?;
    let common: BTreeSet<&Element> = ball
        .iter()
        .filter(|z| prim.set.iter().all(|p| ctx.left_divides(p, z).is_some()))
        .collect();
    let mut primitive_mcms = Vec::new();
    for z in &common {
        let minimal_cm = !ctx
            .divisors(z)
            .iter()
            .any(|d| d.norm() + 1 == z.norm() && common.contains(d));
        if minimal_cm {
            primitive_mcms.push(((*z).clone(), is_garside(ctx, z, bound)?.passed()));
        }
    }
    Ok(GarsideSearch {
        max_norm,
        minimal,
        primitive_mcms,
    })
}

/// A group element `Δ⁻ᵏ·x`, with `Δ ⋠ x` whenever `k > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fraction {
    pub k: usize,
    pub x: Element,
}

impl Fraction {
    pub fn identity() -> Self {
        Fraction::default()
    }
}

/// A fraction with its numerator written in Δ-normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionForm {
    pub k: usize,
    pub tail: NormalSequence,
}

impl FractionForm {
    pub fn to_json(&self, ctx: &MonoidContext) -> Value {
        json!({"k": self.k, "factors": self.tail.render(ctx)})
    }
}

/// A Garside element with its divisors, star map, automorphism and
/// Δ-normal forms.
pub struct GarsideStructure {
    pub delta: Element,
    pub div: ElementSet,
    pub star: BTreeMap<Element, Element>,
    pub phi: BTreeMap<Element, Element>,
    pub order_e: usize,
    phi_letters: Vec<u8>,
    phi_inv_letters: Vec<u8>,
    normalizer: Normalizer,
}

pub fn build_structure(ctx: &MonoidContext, delta: &Element, bound: usize) -> Result<GarsideStructure> {
    if !is_garside(ctx, delta, bound)?.passed() {
        return Err(Error::Precondition(format!("{} is not a Garside element", ctx.render(delta))));
    }
    let div = ElementSet::new(ctx.divisors(delta).iter().cloned()).labeled("Div(Δ)");
    let mut star = BTreeMap::new();
    for x in div.iter() {
        let c = ctx
            .left_divides(x, delta)
            .ok_or_else(|| Error::Inconsistent("divisor without complement".into()))?;
        star.insert(x.clone(), c);
    }
    let phi: BTreeMap<Element, Element> = star.iter().map(|(x, s)| (x.clone(), star[s].clone())).collect();

    let mut phi_letters = vec![0u8; ctx.rank()];
    for g in 0..ctx.rank() as u8 {
        let image = &phi[&ctx.generator(g)];
        if image.norm() != 1 {
            return Err(Error::Inconsistent("φ does not permute the atoms".into()));
        }
        phi_letters[g as usize] = image.canon().letters()[0];
    }
    let mut phi_inv_letters = vec![0u8; ctx.rank()];
    for (g, &h) in phi_letters.iter().enumerate() {
        phi_inv_letters[h as usize] = g as u8;
    }

    let mut order_e = 1;
    let mut cur = phi.clone();
    while cur.iter().any(|(x, y)| x != y) {
        cur = cur.iter().map(|(x, y)| (x.clone(), phi[y].clone())).collect();
        order_e += 1;
    }

    let normalizer = Normalizer::new(ctx, div.clone())?;
    let gs = GarsideStructure {
        delta: delta.clone(),
        div,
        star,
        phi,
        order_e,
        phi_letters,
        phi_inv_letters,
        normalizer,
    };
    for (x, y) in &gs.phi {
        if gs.phi_pow(ctx, x, 1) != *y {
            return Err(Error::Inconsistent("letterwise φ disagrees with x ↦ x**".into()));
        }
    }
    let r = gs.check_phi_and_center(ctx, VERIFY_RADIUS)?;
    if !r.passed() {
        return Err(Error::Inconsistent(format!("Garside structure check failed: {:?}", r.witness)));
    }
    Ok(gs)
}

impl GarsideStructure {
    pub fn normalizer(&self) -> &Normalizer {
        &self.normalizer
    }

    pub fn simples(&self) -> &ElementSet {
        self.normalizer.simples()
    }

    pub fn k(&self) -> usize {
        self.div.len()
    }

    pub fn delta_power(&self, ctx: &MonoidContext, k: usize) -> Element {
        ctx.product(std::iter::repeat_n(&self.delta, k))
    }

    /// `φ^i(x)` for any integer `i`, applied letterwise.
    pub fn phi_pow(&self, ctx: &MonoidContext, x: &Element, i: i64) -> Element {
        let e = self.order_e as i64;
        let steps = i.rem_euclid(e);
        if steps == 0 || x.is_identity() {
            return x.clone();
        }
        let mut letters = x.canon().letters().to_vec();
        for _ in 0..steps {
            for l in letters.iter_mut() {
                *l = self.phi_letters[*l as usize];
            }
        }
        ctx.canonical(&Word::new(letters))
    }

    pub fn phi_inv(&self, ctx: &MonoidContext, x: &Element) -> Element {
        if x.is_identity() {
            return x.clone();
        }
        let letters = x.canon().letters().iter().map(|&l| self.phi_inv_letters[l as usize]).collect();
        ctx.canonical(&Word::new(letters))
    }

    /// Images of the atoms under φ, as rendered pairs.
    pub fn atom_action(&self, ctx: &MonoidContext) -> Vec<(String, String)> {
        ctx.atoms()
            .iter()
            .map(|a| (ctx.render(a), ctx.render(&self.phi[a])))
            .collect()
    }

    /// Verifies `x·Δ = Δ·φ(x)` and `x·Δᵉ = Δᵉ·x` on a ball.
    pub fn check_phi_and_center(&self, ctx: &MonoidContext, radius: usize) -> Result<Report> {
        let de = self.delta_power(ctx, self.order_e);
        let ball = ctx.enumerate_ball(radius)?;
        for x in &ball {
            if ctx.mul(x, &self.delta) != ctx.mul(&self.delta, &self.phi_pow(ctx, x, 1)) {
                return Ok(Report::new("phi_and_center", Status::Fail, radius, true)
                    .with_witness(json!({"conjugation": ctx.render(x)})));
            }
            if ctx.mul(x, &de) != ctx.mul(&de, x) {
                return Ok(Report::new("phi_and_center", Status::Fail, radius, true)
                    .with_witness(json!({"not_central_against": ctx.render(x)})));
            }
        }
        Ok(Report::new("phi_and_center", Status::Pass, radius, true)
            .with_details(json!({"elements": ball.len(), "e": self.order_e})))
    }

    pub fn to_json(&self, ctx: &MonoidContext) -> Value {
        let pairs = |m: &BTreeMap<Element, Element>| -> Vec<[String; 2]> {
            m.iter().map(|(a, b)| [ctx.render(a), ctx.render(b)]).collect()
        };
        json!({
            "delta": ctx.render(&self.delta),
            "div": self.div.render(ctx),
            "star": pairs(&self.star),
            "phi": pairs(&self.phi),
            "e": self.order_e,
            "simples": self.simples().render(ctx),
        })
    }

    /// Strips leading factors Δ while `k > 0`.
    pub fn reduce(&self, ctx: &MonoidContext, mut f: Fraction) -> Fraction {
        while f.k > 0 {
            match ctx.left_divides(&self.delta, &f.x) {
                Some(rest) => {
                    f.x = rest;
                    f.k -= 1;
                }
                None => break,
            }
        }
        f
    }

    pub fn mul_element(&self, ctx: &MonoidContext, f: &Fraction, y: &Element) -> Fraction {
        self.reduce(ctx, Fraction { k: f.k, x: ctx.mul(&f.x, y) })
    }

    /// `x·Δ⁻¹ = Δ⁻¹·φ⁻¹(x)`.
    pub fn mul_delta_inv(&self, ctx: &MonoidContext, f: &Fraction) -> Fraction {
        self.reduce(ctx, Fraction { k: f.k + 1, x: self.phi_inv(ctx, &f.x) })
    }

    /// Right multiplication by `g⁻¹ = g*·Δ⁻¹` for a generator g.
    pub fn mul_generator_inv(&self, ctx: &MonoidContext, f: &Fraction, g: u8) -> Fraction {
        let gstar = &self.star[&ctx.generator(g)];
        let x = ctx.mul(&f.x, gstar);
        self.reduce(ctx, Fraction { k: f.k + 1, x: self.phi_inv(ctx, &x) })
    }

    /// Right multiplication by `y⁻¹` for a monoid element y.
    pub fn mul_element_inv(&self, ctx: &MonoidContext, f: &Fraction, y: &Element) -> Fraction {
        let mut cur = f.clone();
        for &g in y.canon().letters().iter().rev() {
            cur = self.mul_generator_inv(ctx, &cur, g);
        }
        cur
    }

    /// `(Δ⁻ᵃx)(Δ⁻ᵇy) = Δ⁻⁽ᵃ⁺ᵇ⁾·φ⁻ᵇ(x)·y`.
    pub fn mul_fraction(&self, ctx: &MonoidContext, f: &Fraction, g: &Fraction) -> Fraction {
        let x = self.phi_pow(ctx, &f.x, -(g.k as i64));
        self.reduce(ctx, Fraction { k: f.k + g.k, x: ctx.mul(&x, &g.x) })
    }

    pub fn evaluate(&self, ctx: &MonoidContext, w: &SignedWord) -> Fraction {
        let mut f = Fraction::identity();
        for l in &w.0 {
            f = if l.inverse {
                self.mul_generator_inv(ctx, &f, l.generator)
            } else {
                self.mul_element(ctx, &f, &ctx.generator(l.generator))
            };
        }
        f
    }

    pub fn form(&self, ctx: &MonoidContext, f: &Fraction) -> FractionForm {
        FractionForm {
            k: f.k,
            tail: self.normalizer.normalize(ctx, &f.x),
        }
    }

    /// `numerator · denominator⁻¹` as `Δ⁻ᵏx`: with `den·c = Δˡ`, the value
    /// is `Δ⁻ˡ·φ⁻ˡ(num·c)`, then leading Δ factors are stripped.
    pub fn to_fraction(&self, ctx: &MonoidContext, numerator: &Word, denominator: &Word) -> Result<FractionForm> {
        let den = ctx.canonical(denominator);
        let num = ctx.canonical(numerator);
        let cap = den.norm();
        for l in 0..=cap {
            if let Some(c) = ctx.left_divides(&den, &self.delta_power(ctx, l)) {
                let z0 = self.phi_pow(ctx, &ctx.mul(&num, &c), -(l as i64));
                let f = self.reduce(ctx, Fraction { k: l, x: z0 });
                return Ok(self.form(ctx, &f));
            }
        }
        Err(Error::Precondition(format!(
            "{} divides no power of Δ up to {cap}",
            ctx.render(&den)
        )))
    }

    pub fn group_equal(&self, ctx: &MonoidContext, w1: &SignedWord, w2: &SignedWord) -> bool {
        self.evaluate(ctx, w1) == self.evaluate(ctx, w2)
    }

    /// All Δ-normal decompositions of each ball element share one length.
    pub fn check_uniform_length(&self, ctx: &MonoidContext, radius: usize) -> Result<Report> {
        let ball = ctx.enumerate_ball(radius)?;
        let mut unique = true;
        let mut max_forms = 0;
        for x in &ball {
            let forms = self.normalizer.normalize_all(ctx, x)?;
            max_forms = max_forms.max(forms.len());
            unique &= forms.len() == 1;
            let len = forms[0].len();
            if let Some(other) = forms.iter().find(|f| f.len() != len) {
                return Ok(Report::new("uniform_length", Status::Fail, radius, true).with_witness(json!({
                    "element": ctx.render(x),
                    "forms": [forms[0].render(ctx), other.render(ctx)],
                })));
            }
        }
        Ok(Report::new("uniform_length", Status::Pass, radius, true).with_details(json!({
            "elements": ball.len(),
            "unique": unique,
            "max_forms": max_forms,
        })))
    }

    /// For distinct Δ-simples x, x' with the same divisors in Div(Δ), every
    /// mcm m of x and x' must lie above a Δ-simple common multiple of the
    /// pair, or above a divisor of Δ that divides neither x nor x'. Either
    /// way x and x' can never both head a normal form.
    pub fn check_prop912(&self, ctx: &MonoidContext, bound: usize) -> Result<Report> {
        let profile = self.normalizer.profile();
        let simples: Vec<&Element> = self.simples().iter().filter(|x| !x.is_identity()).collect();
        let dn = self.delta.norm();
        let mut complete = true;
        let mut pairs = Vec::new();
        for (i, x) in simples.iter().enumerate() {
            for y in &simples[i + 1..] {
                if profile.signature(ctx, x) != profile.signature(ctx, y) {
                    continue;
                }
                let r = mcms(ctx, x, y, pair_bound(bound, x, y, dn))?;
                complete &= r.complete;
                let shared = profile.signature(ctx, x);
                let mut mcm_json = Vec::new();
                for m in &r.mcms {
                    let simple_cm = self.simples().iter().find(|s| {
                        ctx.left_divides(x, s).is_some()
                            && ctx.left_divides(y, s).is_some()
                            && ctx.left_divides(s, m).is_some()
                    });
                    let outside = self.div.iter().enumerate().find(|(j, d)| {
                        shared[j / 64] >> (j % 64) & 1 == 0 && ctx.left_divides(d, m).is_some()
                    });
                    let witness = match (simple_cm, outside) {
                        (Some(s), _) => json!({"mcm": ctx.render(m), "simple_common_multiple": ctx.render(s)}),
                        (None, Some((_, d))) => json!({"mcm": ctx.render(m), "divisor_of_delta": ctx.render(d)}),
                        (None, None) => {
                            return Ok(Report::new("unique_form_pairs", Status::Fail, bound, r.complete).with_witness(json!({
                                "pair": [ctx.render(x), ctx.render(y)],
                                "mcm": ctx.render(m),
                            })))
                        }
                    };
                    mcm_json.push(witness);
                }
                pairs.push(json!({"pair": [ctx.render(x), ctx.render(y)], "mcms": mcm_json}));
            }
        }
        let vacuous = pairs.is_empty();
        Ok(Report::new("unique_form_pairs", Status::Pass, bound, complete)
            .with_details(json!({"vacuous": vacuous, "pairs": pairs})))
    }
}
