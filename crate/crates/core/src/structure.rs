//! Atoms, minimal common multiples, the primitive closure, spanning-set
//! verification, simple elements and the covering relation.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use parking_lot::RwLock;
use serde_json::json;

use crate::congruence::{Element, MonoidContext};
use crate::error::{Error, Result};
use crate::report::{Report, Status};

/// A finite set of elements with an optional tag such as `P_M`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ElementSet {
    members: BTreeSet<Element>,
    label: Option<String>,
}

impl ElementSet {
    pub fn new(members: impl IntoIterator<Item = Element>) -> Self {
        ElementSet {
            members: members.into_iter().collect(),
            label: None,
        }
    }

    pub fn labeled(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn members(&self) -> &BTreeSet<Element> {
        &self.members
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.members.contains(x)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Element> {
        self.members.iter()
    }

    pub fn insert(&mut self, x: Element) -> bool {
        self.members.insert(x)
    }

    pub fn max_norm(&self) -> usize {
        self.members.iter().map(Element::norm).max().unwrap_or(0)
    }

    /// Canonical words of the members, in element order.
    pub fn render(&self, ctx: &MonoidContext) -> Vec<String> {
        self.members.iter().map(|x| ctx.render(x)).collect()
    }

    /// The canonicalized product set `S^k`.
    pub fn power(&self, ctx: &MonoidContext, k: usize) -> ElementSet {
        let mut cur = BTreeSet::from([Element::identity()]);
        for _ in 0..k {
            let mut next = BTreeSet::new();
            for x in &cur {
                for s in &self.members {
                    next.insert(ctx.mul(x, s));
                }
            }
            cur = next;
        }
        ElementSet::new(cur)
    }
}

impl FromIterator<Element> for ElementSet {
    fn from_iter<I: IntoIterator<Item = Element>>(iter: I) -> Self {
        ElementSet::new(iter)
    }
}

/// The mcms of a pair found up to `search_bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McmResult {
    pub pair: (Element, Element),
    pub mcms: BTreeSet<Element>,
    /// mcm z ↦ x' with x·x' = z.
    pub complements_left: BTreeMap<Element, Element>,
    /// mcm z ↦ y' with y·y' = z.
    pub complements_right: BTreeMap<Element, Element>,
    pub search_bound: usize,
    pub complete: bool,
}

pub fn atoms(ctx: &MonoidContext) -> ElementSet {
    ElementSet::new(ctx.atoms()).labeled("A_M")
}

pub fn divisors(ctx: &MonoidContext, x: &Element) -> ElementSet {
    ElementSet::new(ctx.divisors(x).iter().cloned()).labeled("Div")
}

pub fn right_divisors(ctx: &MonoidContext, x: &Element) -> ElementSet {
    ElementSet::new(ctx.right_divisors(x).iter().cloned()).labeled("Div_r")
}

fn single_mcm(ctx: &MonoidContext, x: &Element, y: &Element, z: &Element, bound: usize) -> McmResult {
    let cl = ctx.left_divides(x, z).expect("z is a multiple of x");
    let cr = ctx.left_divides(y, z).expect("z is a multiple of y");
    McmResult {
        pair: (x.clone(), y.clone()),
        mcms: BTreeSet::from([z.clone()]),
        complements_left: BTreeMap::from([(z.clone(), cl)]),
        complements_right: BTreeMap::from([(z.clone(), cr)]),
        search_bound: bound,
        complete: true,
    }
}

/// Minimal common multiples of `x` and `y` of norm at most `bound`.
///
/// A common multiple z of norm m is minimal iff none of its norm m-1 left
/// divisors is a common multiple. The search is reported complete when a
/// whole level above the last mcm found, still within the bound, added
/// nothing.
pub fn mcms(ctx: &MonoidContext, x: &Element, y: &Element, bound: usize) -> Result<McmResult> {
    if ctx.left_divides(x, y).is_some() {
        return Ok(single_mcm(ctx, x, y, y, bound));
    }
    if ctx.left_divides(y, x).is_some() {
        return Ok(single_mcm(ctx, x, y, x, bound));
    }
    let lo = x.norm().max(y.norm());
    let mut prev: BTreeSet<Element> = BTreeSet::new();
    let mut found = BTreeSet::new();
    let mut last_level = None;
    for m in lo..=bound {
        let mx = ctx.right_multiples(x, m)?;
        let my = ctx.right_multiples(y, m)?;
        let cm: BTreeSet<Element> = mx.intersection(&my).cloned().collect();
        for z in &cm {
            let minimal = !ctx
                .divisors(z)
                .iter()
                .any(|d| d.norm() + 1 == m && prev.contains(d));
            if minimal {
                found.insert(z.clone());
                last_level = Some(m);
            }
        }
        prev = cm;
    }
    let mut complements_left = BTreeMap::new();
    let mut complements_right = BTreeMap::new();
    for z in &found {
        complements_left.insert(z.clone(), ctx.left_divides(x, z).expect("common multiple"));
        complements_right.insert(z.clone(), ctx.left_divides(y, z).expect("common multiple"));
    }
    Ok(McmResult {
        pair: (x.clone(), y.clone()),
        mcms: found,
        complements_left,
        complements_right,
        search_bound: bound,
        complete: last_level.is_some_and(|l| l < bound),
    })
}

/// Per-pair search bound: the caller's floor, raised to `|x| + |y|` plus
/// the largest norm in the ambient set.
pub fn pair_bound(floor: usize, x: &Element, y: &Element, ambient_max_norm: usize) -> usize {
    floor.max(x.norm() + y.norm() + ambient_max_norm)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureResult {
    pub set: ElementSet,
    /// False when the cap stopped the fixpoint iteration.
    pub terminated: bool,
    /// Pairs whose mcm search was not complete within its bound.
    pub incomplete_pairs: Vec<(Element, Element)>,
}

impl ClosureResult {
    pub fn is_thin(&self) -> bool {
        self.terminated && self.incomplete_pairs.is_empty()
    }
}

/// Closure of `{1} ∪ atoms` under mcm complements.
pub fn primitive_closure(ctx: &MonoidContext, cap: usize, bound: usize) -> Result<ClosureResult> {
    let mut set: BTreeSet<Element> = BTreeSet::from([Element::identity()]);
    set.extend(ctx.atoms());
    let mut done: HashSet<(Element, Element)> = HashSet::new();
    let mut incomplete = Vec::new();
    let mut terminated = true;
    loop {
        let members: Vec<Element> = set.iter().filter(|x| !x.is_identity()).cloned().collect();
        let max_norm = set.iter().map(Element::norm).max().unwrap_or(0);
        let mut fresh = BTreeSet::new();
        for (i, x) in members.iter().enumerate() {
            for y in &members[i + 1..] {
                if !done.insert((x.clone(), y.clone())) {
                    continue;
                }
                let r = mcms(ctx, x, y, pair_bound(bound, x, y, max_norm))?;
                if !r.complete {
                    incomplete.push((x.clone(), y.clone()));
                }
                for c in r.complements_left.values().chain(r.complements_right.values()) {
                    if !set.contains(c) {
                        fresh.insert(c.clone());
                    }
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        set.extend(fresh);
        if set.len() > cap {
            terminated = false;
            break;
        }
    }
    Ok(ClosureResult {
        set: ElementSet::new(set).labeled("P_M"),
        terminated,
        incomplete_pairs: incomplete,
    })
}

fn pair_json(ctx: &MonoidContext, x: &Element, y: &Element) -> serde_json::Value {
    json!([ctx.render(x), ctx.render(y)])
}

/// Checks that `s` contains 1 and the atoms, and that both complements of
/// every mcm of two members lie in `s`.
pub fn is_spanning(ctx: &MonoidContext, s: &ElementSet, bound: usize) -> Result<Report> {
    if !s.contains(&Element::identity()) {
        return Ok(Report::new("is_spanning", Status::Fail, bound, true)
            .with_witness(json!({"missing": "1"})));
    }
    for a in ctx.atoms() {
        if !s.contains(&a) {
            return Ok(Report::new("is_spanning", Status::Fail, bound, true)
                .with_witness(json!({"missing_atom": ctx.render(&a)})));
        }
    }
    let members: Vec<&Element> = s.iter().filter(|x| !x.is_identity()).collect();
    let max_norm = s.max_norm();
    let mut complete = true;
    let mut pairs = 0usize;
    for (i, x) in members.iter().enumerate() {
        for y in &members[i + 1..] {
            pairs += 1;
            let r = mcms(ctx, x, y, pair_bound(bound, x, y, max_norm))?;
            complete &= r.complete;
            for z in &r.mcms {
                for c in [&r.complements_left[z], &r.complements_right[z]] {
                    if !s.contains(c) {
                        return Ok(Report::new("is_spanning", Status::Fail, bound, r.complete)
                            .with_witness(json!({
                                "pair": pair_json(ctx, x, y),
                                "mcm": ctx.render(z),
                                "complement": ctx.render(c),
                            })));
                    }
                }
            }
        }
    }
    Ok(Report::new("is_spanning", Status::Pass, bound, complete)
        .with_details(json!({"pairs": pairs, "size": s.len()})))
}

/// Checks that every two members of `s` have a common multiple.
pub fn check_ore(ctx: &MonoidContext, s: &ElementSet, bound: usize) -> Result<Report> {
    let members: Vec<&Element> = s.iter().filter(|x| !x.is_identity()).collect();
    let max_norm = s.max_norm();
    for (i, x) in members.iter().enumerate() {
        for y in &members[i + 1..] {
            let r = mcms(ctx, x, y, pair_bound(bound, x, y, max_norm))?;
            if r.mcms.is_empty() {
                return Ok(Report::new("check_ore", Status::Fail, bound, false)
                    .with_witness(json!({"pair": pair_json(ctx, x, y)})));
            }
        }
    }
    Ok(Report::new("check_ore", Status::Pass, bound, true))
}

/// The members of a fixed set S dividing an element, as a bitset over S.
pub type Signature = Vec<u64>;

/// Memoized `Div(x) ∩ S` for a fixed S, with the simplicity and covering
/// tests built on it.
pub struct SProfile {
    set: ElementSet,
    sigs: RwLock<HashMap<Element, Arc<Signature>>>,
}

impl SProfile {
    pub fn new(set: ElementSet) -> Self {
        SProfile {
            set,
            sigs: RwLock::new(HashMap::new()),
        }
    }

    pub fn set(&self) -> &ElementSet {
        &self.set
    }

    pub fn signature(&self, ctx: &MonoidContext, x: &Element) -> Arc<Signature> {
        if let Some(s) = self.sigs.read().get(x) {
            return s.clone();
        }
        let divs = ctx.divisors(x);
        let mut bits = vec![0u64; self.set.len().div_ceil(64)];
        for (i, s) in self.set.iter().enumerate() {
            if s.norm() <= x.norm() && divs.contains(s) {
                bits[i / 64] |= 1 << (i % 64);
            }
        }
        let bits = Arc::new(bits);
        self.sigs.write().insert(x.clone(), bits.clone());
        bits
    }

    /// `Div(x) ∩ S` as elements.
    pub fn divisors_in_set(&self, ctx: &MonoidContext, x: &Element) -> Vec<Element> {
        let sig = self.signature(ctx, x);
        self.set
            .iter()
            .enumerate()
            .filter(|(i, _)| sig[i / 64] >> (i % 64) & 1 == 1)
            .map(|(_, s)| s.clone())
            .collect()
    }

    /// No proper divisor of `x` has the same S-divisors. Checking the
    /// divisors of norm `|x| - 1` suffices since `Div(·) ∩ S` is monotone.
    pub fn is_simple(&self, ctx: &MonoidContext, x: &Element) -> bool {
        if x.is_identity() {
            return true;
        }
        let sig = self.signature(ctx, x);
        !ctx
            .divisors(x)
            .iter()
            .filter(|d| d.norm() + 1 == x.norm())
            .any(|d| *self.signature(ctx, d) == *sig)
    }

    /// `x ▷_S y`: every member of S dividing `x·y` divides `x`.
    pub fn covers(&self, ctx: &MonoidContext, x: &Element, y: &Element) -> bool {
        if y.is_identity() {
            return true;
        }
        *self.signature(ctx, &ctx.mul(x, y)) == *self.signature(ctx, x)
    }
}

pub fn covers(ctx: &MonoidContext, s: &ElementSet, x: &Element, y: &Element) -> bool {
    SProfile::new(s.clone()).covers(ctx, x, y)
}

/// All S-simple elements, level by level: a norm-l simple is an atom times
/// a norm-(l-1) simple, since right divisors of simples are simple.
pub fn enumerate_simples(ctx: &MonoidContext, s: &ElementSet) -> Result<ElementSet> {
    let profile = SProfile::new(s.clone());
    enumerate_simples_with(ctx, &profile)
}

pub fn enumerate_simples_with(ctx: &MonoidContext, profile: &SProfile) -> Result<ElementSet> {
    let limit = profile.set().len() * profile.set().max_norm().max(1);
    let mut all = BTreeSet::from([Element::identity()]);
    let mut level = vec![Element::identity()];
    let mut norm = 0;
    let atoms = ctx.atoms();
    while !level.is_empty() {
        norm += 1;
        let candidates: BTreeSet<Element> = atoms
            .iter()
            .flat_map(|a| level.iter().map(move |x| (a, x)))
            .map(|(a, x)| ctx.mul(a, x))
            .collect();
        level = candidates
            .into_iter()
            .filter(|c| profile.is_simple(ctx, c))
            .collect();
        if !level.is_empty() && norm > limit {
            return Err(Error::ResourceLimit {
                what: "enumerating simple elements".into(),
                level: norm,
            });
        }
        all.extend(level.iter().cloned());
    }
    Ok(ElementSet::new(all).labeled("simples"))
}
