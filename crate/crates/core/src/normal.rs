//! S-normal decompositions, the left-multiplication update and grid
//! derivations of equalities over a spanning set.

use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::RwLock;

use crate::congruence::{Element, MonoidContext};
use crate::error::{Error, Result};
use crate::structure::{enumerate_simples_with, ElementSet, SProfile};

/// A sequence of non-identity factors; the empty sequence stands for 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NormalSequence {
    pub factors: Vec<Element>,
}

impl NormalSequence {
    pub fn new(factors: Vec<Element>) -> Self {
        NormalSequence { factors }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn product(&self, ctx: &MonoidContext) -> Element {
        ctx.product(&self.factors)
    }

    pub fn render(&self, ctx: &MonoidContext) -> Vec<String> {
        self.factors.iter().map(|x| ctx.render(x)).collect()
    }
}

/// Cap on the number of decompositions `normalize_all` may return.
pub const MAX_FORMS: usize = 100_000;

/// Normal forms with respect to a fixed spanning set S.
pub struct Normalizer {
    profile: SProfile,
    simples: ElementSet,
    memo: RwLock<HashMap<Element, Arc<Vec<NormalSequence>>>>,
}

fn lex_key(x: &Element) -> &[u8] {
    x.canon().letters()
}

impl Normalizer {
    /// Enumerates the S-simple elements of a spanning set `s`.
    pub fn new(ctx: &MonoidContext, s: ElementSet) -> Result<Self> {
        let profile = SProfile::new(s);
        let simples = enumerate_simples_with(ctx, &profile)?;
        Ok(Normalizer {
            profile,
            simples,
            memo: RwLock::new(HashMap::new()),
        })
    }

    pub fn set(&self) -> &ElementSet {
        self.profile.set()
    }

    pub fn simples(&self) -> &ElementSet {
        &self.simples
    }

    pub fn profile(&self) -> &SProfile {
        &self.profile
    }

    pub fn covers(&self, ctx: &MonoidContext, x: &Element, y: &Element) -> bool {
        self.profile.covers(ctx, x, y)
    }

    /// Non-identity simple factors with each adjacent pair covering.
    pub fn is_normal(&self, ctx: &MonoidContext, seq: &[Element]) -> bool {
        seq.iter().all(|x| !x.is_identity() && self.simples.contains(x))
            && seq.windows(2).all(|w| self.covers(ctx, &w[0], &w[1]))
    }

    /// Prenormality read directly off the definition:
    /// `Div(x_i) ∩ S = Div(x_i ⋯ x_n) ∩ S` for every i.
    pub fn is_prenormal_by_definition(&self, ctx: &MonoidContext, seq: &[Element]) -> bool {
        (0..seq.len()).all(|i| {
            let tail = ctx.product(&seq[i..]);
            self.profile.signature(ctx, &seq[i]) == self.profile.signature(ctx, &tail)
        })
    }

    /// Simple divisors of `x` carrying all of its S-divisors, in lex order
    /// of their canonical words.
    pub fn heads(&self, ctx: &MonoidContext, x: &Element) -> Vec<Element> {
        if x.is_identity() {
            return Vec::new();
        }
        let sig = self.profile.signature(ctx, x);
        let mut out: Vec<Element> = ctx
            .divisors(x)
            .iter()
            .filter(|d| !d.is_identity() && self.simples.contains(d))
            .filter(|d| self.profile.signature(ctx, d) == sig)
            .cloned()
            .collect();
        out.sort_by(|a, b| lex_key(a).cmp(lex_key(b)));
        out
    }

    /// The greedy decomposition taking the lex-least head at each step.
    pub fn normalize(&self, ctx: &MonoidContext, x: &Element) -> NormalSequence {
        let mut factors = Vec::new();
        let mut rest = x.clone();
        while !rest.is_identity() {
            let head = self
                .heads(ctx, &rest)
                .into_iter()
                .next()
                .expect("a maximal simple divisor exists for a spanning set");
            rest = ctx.left_divides(&head, &rest).expect("head divides");
            factors.push(head);
        }
        NormalSequence { factors }
    }

    /// Every normal decomposition of `x`, sorted.
    pub fn normalize_all(&self, ctx: &MonoidContext, x: &Element) -> Result<Arc<Vec<NormalSequence>>> {
        if let Some(v) = self.memo.read().get(x) {
            return Ok(v.clone());
        }
        let mut out = Vec::new();
        if x.is_identity() {
            out.push(NormalSequence::default());
        }
        for head in self.heads(ctx, x) {
            let rest = ctx.left_divides(&head, x).expect("head divides");
            for tail in self.normalize_all(ctx, &rest)?.iter() {
                let mut factors = Vec::with_capacity(tail.len() + 1);
                factors.push(head.clone());
                factors.extend(tail.factors.iter().cloned());
                out.push(NormalSequence { factors });
                if out.len() > MAX_FORMS {
                    return Err(Error::ResourceLimit {
                        what: "enumerating normal decompositions".into(),
                        level: x.norm(),
                    });
                }
            }
        }
        out.sort();
        let out = Arc::new(out);
        self.memo.write().insert(x.clone(), out.clone());
        Ok(out)
    }

    /// A normal decomposition of `z` with at most two factors.
    fn short_form(&self, ctx: &MonoidContext, z: &Element) -> Result<NormalSequence> {
        let nf = self.normalize(ctx, z);
        if nf.len() <= 2 {
            return Ok(nf);
        }
        self.normalize_all(ctx, z)?
            .iter()
            .find(|s| s.len() <= 2)
            .cloned()
            .ok_or_else(|| {
                Error::Inconsistent(format!(
                    "no normal decomposition of length <= 2 for {}",
                    ctx.render(z)
                ))
            })
    }

    /// Slides the simple element `y` through a normal sequence, producing a
    /// normal decomposition of `y·x₁⋯xₙ`. Fails with `Inconsistent` when some
    /// intermediate product of two simples has no normal decomposition of
    /// length at most 2, as happens in M3 with S = Div(b²).
    pub fn left_mult_update(
        &self,
        ctx: &MonoidContext,
        y: &Element,
        seq: &NormalSequence,
    ) -> Result<NormalSequence> {
        if !self.simples.contains(y) {
            return Err(Error::Precondition(format!("{} is not simple", ctx.render(y))));
        }
        if !self.is_normal(ctx, &seq.factors) {
            return Err(Error::Precondition("sequence is not normal".into()));
        }
        let mut carry = y.clone();
        let mut out = Vec::with_capacity(seq.len() + 1);
        for x in &seq.factors {
            let pair = self.short_form(ctx, &ctx.mul(&carry, x))?;
            let mut it = pair.factors.into_iter();
            out.push(it.next().unwrap_or_default());
            carry = it.next().unwrap_or_default();
        }
        out.push(carry);
        out.retain(|x| !x.is_identity());
        let result = NormalSequence { factors: out };
        let expected = ctx.mul(y, &seq.product(ctx));
        if !self.is_normal(ctx, &result.factors) || result.product(ctx) != expected {
            return Err(Error::Inconsistent("left multiplication update failed".into()));
        }
        Ok(result)
    }
}

/// Greediness by maximal divisors in S: each factor is a ⪯-maximal member of S
/// dividing the product of the remaining factors.
pub fn is_max_divisor_sequence(ctx: &MonoidContext, s: &ElementSet, seq: &[Element]) -> bool {
    (0..seq.len()).all(|i| {
        let tail = ctx.product(&seq[i..]);
        let x = &seq[i];
        s.contains(x)
            && ctx.left_divides(x, &tail).is_some()
            && !s.iter().any(|d| {
                d != x
                    && ctx.left_divides(d, &tail).is_some()
                    && ctx.left_divides(x, d).is_some()
            })
    })
}

/// One rewriting step `lhs → rhs` at a letter position of the word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub position: usize,
    pub lhs: Vec<Element>,
    pub rhs: Vec<Element>,
}

/// A replayable proof of `source = target` by relations `x·y' = y·x'` with
/// all four letters in S. Identity letters are erased throughout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub source: Vec<Element>,
    pub target: Vec<Element>,
    pub steps: Vec<Step>,
    pub relation_count: usize,
}

impl Derivation {
    /// Replays the steps from `source`, checking each one is a valid
    /// equality, and returns the final word.
    pub fn replay(&self, ctx: &MonoidContext) -> Result<Vec<Element>> {
        let mut word = self.source.clone();
        for step in &self.steps {
            let end = step.position + step.lhs.len();
            if end > word.len() || word[step.position..end] != step.lhs[..] {
                return Err(Error::Inconsistent("derivation step does not apply".into()));
            }
            if ctx.product(&step.lhs) != ctx.product(&step.rhs) {
                return Err(Error::Inconsistent("derivation step is not a relation".into()));
            }
            word.splice(step.position..end, step.rhs.iter().cloned());
        }
        Ok(word)
    }

    /// `(p+q)²/4 + (p+q)`, the grid bound for words of lengths p and q.
    pub fn bound(p: usize, q: usize) -> usize {
        let n = p + q;
        n * n / 4 + n
    }
}

struct Grid<'a> {
    ctx: &'a MonoidContext,
    s: Vec<Element>,
    // x[i][j], 1 <= i <= p, 0 <= j <= q: vertical edges
    x: Vec<Vec<Element>>,
    // y[i][j], 0 <= i <= p, 1 <= j <= q: horizontal edges
    y: Vec<Vec<Element>>,
}

impl Grid<'_> {
    fn close_cell(&self, x: &Element, y: &Element, xpp: &Element, ypp: &Element) -> Result<(Element, Element, Element)> {
        for xp in &self.s {
            let yx = self.ctx.mul(y, xp);
            for yp in &self.s {
                if self.ctx.mul(x, yp) != yx {
                    continue;
                }
                let Some(z) = self.ctx.left_divides(yp, ypp) else {
                    continue;
                };
                if self.ctx.mul(xp, &z) == *xpp {
                    return Ok((xp.clone(), yp.clone(), z));
                }
            }
        }
        Err(Error::Inconsistent(format!(
            "grid cell ({}, {}) cannot be closed within S",
            self.ctx.render(x),
            self.ctx.render(y)
        )))
    }

    /// Fills the p×q block whose top-left corner is (i0, j0), given its
    /// left and top edges and complements with
    /// `(∏ left)·ypp = (∏ top)·xpp`. Returns z.
    fn fill(&mut self, i0: usize, j0: usize, p: usize, q: usize, xpp: Element, ypp: Element) -> Result<Element> {
        if p == 0 {
            return Ok(xpp);
        }
        if q == 0 {
            return Ok(ypp);
        }
        if p == 1 && q == 1 {
            let (xp, yp, z) = self.close_cell(&self.x[i0 + 1][j0], &self.y[i0][j0 + 1], &xpp, &ypp)?;
            self.x[i0 + 1][j0 + 1] = xp;
            self.y[i0 + 1][j0 + 1] = yp;
            return Ok(z);
        }
        if q >= 2 {
            let q1 = q / 2;
            let top2 = self.ctx.product(&self.y[i0][j0 + q1 + 1..=j0 + q]);
            let z1 = self.fill(i0, j0, p, q1, self.ctx.mul(&top2, &xpp), ypp)?;
            self.fill(i0, j0 + q1, p, q - q1, xpp, z1)
        } else {
            let p1 = p / 2;
            let left2: Vec<Element> = (i0 + p1 + 1..=i0 + p).map(|i| self.x[i][j0].clone()).collect();
            let left2 = self.ctx.product(&left2);
            let z1 = self.fill(i0, j0, p1, q, xpp, self.ctx.mul(&left2, &ypp))?;
            self.fill(i0 + p1, j0, p - p1, q, z1, ypp)
        }
    }
}

fn drop_identity(xs: &[Element]) -> Vec<Element> {
    xs.iter().filter(|x| !x.is_identity()).cloned().collect()
}

/// Proves `u = v` for words over a spanning set S by closing the grid of
/// cells `x·y' = y·x'` between them.
pub fn grid_prove_equality(
    ctx: &MonoidContext,
    s: &ElementSet,
    u: &[Element],
    v: &[Element],
) -> Result<Derivation> {
    if let Some(bad) = u.iter().chain(v).find(|x| !s.contains(x)) {
        return Err(Error::Precondition(format!("letter {} is not in S", ctx.render(bad))));
    }
    if ctx.product(u) != ctx.product(v) {
        return Err(Error::Precondition("the two words are not equal".into()));
    }
    let (p, q) = (u.len(), v.len());
    let one = Element::identity();
    let mut grid = Grid {
        ctx,
        s: s.iter().cloned().collect(),
        x: vec![vec![one.clone(); q + 1]; p + 1],
        y: vec![vec![one.clone(); q + 1]; p + 1],
    };
    for (i, a) in u.iter().enumerate() {
        grid.x[i + 1][0] = a.clone();
    }
    for (j, b) in v.iter().enumerate() {
        grid.y[0][j + 1] = b.clone();
    }
    let z = grid.fill(0, 0, p, q, one.clone(), one.clone())?;
    if !z.is_identity() {
        return Err(Error::Inconsistent("grid closed with a non-trivial unit".into()));
    }

    let mut word: Vec<Element> = u.to_vec();
    word.extend((1..=q).map(|j| grid.y[p][j].clone()));
    let mut steps = Vec::new();
    for i in (1..=p).rev() {
        for j in 1..=q {
            let pos = (i - 1) + (j - 1);
            debug_assert!(word[pos] == grid.x[i][j - 1] && word[pos + 1] == grid.y[i][j]);
            let lhs = drop_identity(&word[pos..pos + 2]);
            word[pos] = grid.y[i - 1][j].clone();
            word[pos + 1] = grid.x[i][j].clone();
            let rhs = drop_identity(&word[pos..pos + 2]);
            if lhs != rhs {
                steps.push(Step {
                    position: word[..pos].iter().filter(|x| !x.is_identity()).count(),
                    lhs,
                    rhs,
                });
            }
        }
    }
    let derivation = Derivation {
        source: drop_identity(u),
        target: drop_identity(v),
        relation_count: steps.len(),
        steps,
    };
    if derivation.replay(ctx)? != derivation.target {
        return Err(Error::Inconsistent("grid derivation does not reach the target".into()));
    }
    Ok(derivation)
}

/// A letter of S or the inverse of one.
pub type SignedElement = (Element, bool);

/// Proof that a word over S ∪ S⁻¹ equals 1 in the group of fractions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupDerivation {
    pub length: usize,
    /// Swaps `y⁻¹x → x'y'⁻¹` that are genuine relations.
    pub swaps: usize,
    pub grid: Derivation,
    pub relation_count: usize,
}

impl GroupDerivation {
    /// `5n²/4` for a word of length n.
    pub fn bound(n: usize) -> usize {
        5 * n * n / 4
    }
}

/// Moves every inverse letter to the right with swaps `y⁻¹x = x'y'⁻¹`
/// (`x·y' = y·x'` in S), then proves the positive and negative parts equal
/// with the grid.
pub fn grid_prove_identity(
    ctx: &MonoidContext,
    s: &ElementSet,
    word: &[SignedElement],
) -> Result<GroupDerivation> {
    if let Some((bad, _)) = word.iter().find(|(x, _)| !s.contains(x)) {
        return Err(Error::Precondition(format!("letter {} is not in S", ctx.render(bad))));
    }
    let members: Vec<Element> = s.iter().cloned().collect();
    let mut w = word.to_vec();
    let mut swaps = 0;
    while let Some(i) = (0..w.len().saturating_sub(1)).find(|&i| w[i].1 && !w[i + 1].1) {
        let y = w[i].0.clone();
        let x = w[i + 1].0.clone();
        let (xp, yp) = members
            .iter()
            .flat_map(|xp| members.iter().map(move |yp| (xp, yp)))
            .find(|(xp, yp)| ctx.mul(&x, yp) == ctx.mul(&y, xp))
            .ok_or_else(|| {
                Error::Inconsistent(format!(
                    "no common multiple of {} and {} within S",
                    ctx.render(&x),
                    ctx.render(&y)
                ))
            })?;
        let free_cancellation = x == y && xp.is_identity() && yp.is_identity();
        let signed = |l: [(&Element, bool); 2]| -> Vec<(Element, bool)> {
            l.iter()
                .filter(|(e, _)| !e.is_identity())
                .map(|(e, inv)| ((*e).clone(), *inv))
                .collect()
        };
        let unchanged = signed([(&y, true), (&x, false)]) == signed([(xp, false), (yp, true)]);
        if !free_cancellation && !unchanged {
            swaps += 1;
        }
        w[i] = (xp.clone(), false);
        w[i + 1] = (yp.clone(), true);
    }
    let positive: Vec<Element> = w.iter().filter(|l| !l.1).map(|l| l.0.clone()).collect();
    let negative: Vec<Element> = w.iter().rev().filter(|l| l.1).map(|l| l.0.clone()).collect();
    if ctx.product(&positive) != ctx.product(&negative) {
        return Err(Error::Precondition("the word does not evaluate to 1".into()));
    }
    let grid = grid_prove_equality(ctx, s, &positive, &negative)?;
    Ok(GroupDerivation {
        length: word.len(),
        swaps,
        relation_count: swaps + grid.relation_count,
        grid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::fixture;

    fn setup(name: &str, s: &[&str]) -> (MonoidContext, Normalizer) {
        let ctx = MonoidContext::new(fixture(name).unwrap());
        let set: ElementSet = s.iter().map(|w| ctx.element(w).unwrap()).collect();
        let n = Normalizer::new(&ctx, set).unwrap();
        (ctx, n)
    }

    fn seq(ctx: &MonoidContext, ws: &[&str]) -> Vec<Element> {
        ws.iter().map(|w| ctx.element(w).unwrap()).collect()
    }

    #[test]
    fn normality() {
        let (ctx, n) = setup("M1", &["", "a", "b"]);
        assert!(n.is_normal(&ctx, &seq(&ctx, &["aa", "a"])));
        assert!(!n.is_normal(&ctx, &seq(&ctx, &["b", "a"])));
        assert!(n.is_normal(&ctx, &[]));
    }

    #[test]
    fn greedy_and_all_forms() {
        let (ctx, n) = setup("M1", &["", "a", "b"]);
        let e = |s| ctx.element(s).unwrap();
        assert_eq!(n.normalize(&ctx, &e("aaa")).render(&ctx), ["aa", "a"]);
        assert!(n.normalize(&ctx, &e("")).is_empty());
        assert_eq!(n.normalize(&ctx, &e("aaaa")).render(&ctx), ["aa", "aa"]);
        let all: Vec<Vec<String>> = n
            .normalize_all(&ctx, &e("aaaa"))
            .unwrap()
            .iter()
            .map(|s| s.render(&ctx))
            .collect();
        assert_eq!(all, [vec!["aa", "aa"], vec!["ab", "ab"]]);
        assert_eq!(n.normalize_all(&ctx, &e("b")).unwrap().len(), 1);
    }

    #[test]
    fn m3_forms_are_unique() {
        let (ctx, n) = setup("M3", &["", "a", "b", "c"]);
        for x in ctx.enumerate_ball(4).unwrap() {
            assert_eq!(n.normalize_all(&ctx, &x).unwrap().len(), 1, "{}", ctx.render(&x));
        }
    }

    #[test]
    fn left_multiplication() {
        let (ctx, n) = setup("M1", &["", "a", "b"]);
        let e = |s| ctx.element(s).unwrap();
        let x = NormalSequence::new(seq(&ctx, &["aa", "a"]));
        let r = n.left_mult_update(&ctx, &e("a"), &x).unwrap();
        assert!(n.normalize_all(&ctx, &e("aaaa")).unwrap().contains(&r));
        assert_eq!(n.left_mult_update(&ctx, &e(""), &x).unwrap(), x);
        assert!(matches!(
            n.left_mult_update(&ctx, &e("aaa"), &x),
            Err(Error::Precondition(_))
        ));

        let (b3, nb) = setup("B3", &["", "s1", "s2", "s1s2", "s2s1", "s1s2s1"]);
        let r = nb
            .left_mult_update(&b3, &b3.element("s1").unwrap(), &NormalSequence::new(seq(&b3, &["s2"])))
            .unwrap();
        assert_eq!(r.render(&b3), ["s1 s2"]);
    }

    #[test]
    fn two_simples_can_need_three_factors() {
        let (ctx, n) = setup("M3", &["", "a", "b", "c", "bb"]);
        let e = |s| ctx.element(s).unwrap();
        assert!(n.simples().contains(&e("ba")) && n.simples().contains(&e("ab")));
        let forms = n.normalize_all(&ctx, &e("baab")).unwrap();
        let rendered: Vec<Vec<String>> = forms.iter().map(|f| f.render(&ctx)).collect();
        assert_eq!(rendered, [["ac", "c", "c"]]);
        let x = NormalSequence::new(vec![e("ab")]);
        assert!(matches!(n.left_mult_update(&ctx, &e("ba"), &x), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn remark_max_divisor_sequences() {
        let ctx = MonoidContext::new(fixture("M1").unwrap());
        let s: ElementSet = seq(&ctx, &["", "a", "b", "aa"]).into_iter().collect();
        assert!(is_max_divisor_sequence(&ctx, &s, &seq(&ctx, &["a", "b"])));
        assert!(is_max_divisor_sequence(&ctx, &s, &seq(&ctx, &["b", "a"])));
        assert!(!is_max_divisor_sequence(&ctx, &s, &seq(&ctx, &["a", "b", "a"])));
    }

    #[test]
    fn grid_examples() {
        let ctx = MonoidContext::new(fixture("M1").unwrap());
        let s: ElementSet = seq(&ctx, &["", "a", "b"]).into_iter().collect();
        let d = grid_prove_equality(&ctx, &s, &seq(&ctx, &["a", "a"]), &seq(&ctx, &["b", "b"])).unwrap();
        assert_eq!(d.relation_count, 1);
        let u = seq(&ctx, &["a", "b", "a", "b"]);
        assert_eq!(grid_prove_equality(&ctx, &s, &u, &u).unwrap().relation_count, 0);
        let d = grid_prove_equality(&ctx, &s, &u, &seq(&ctx, &["a", "a", "a", "a"])).unwrap();
        assert!(d.relation_count <= 24);
        assert_eq!(d.replay(&ctx).unwrap(), d.target);
        assert!(grid_prove_equality(&ctx, &s, &u, &seq(&ctx, &["a", "a", "a", "b"])).is_err());
    }

    #[test]
    fn group_grid() {
        let ctx = MonoidContext::new(fixture("M1").unwrap());
        let s: ElementSet = seq(&ctx, &["", "a", "b"]).into_iter().collect();
        let e = |w| ctx.element(w).unwrap();
        // a⁻¹ b b⁻¹ a and a⁻¹ a⁻¹ b b
        let w = vec![(e("a"), true), (e("b"), false), (e("b"), true), (e("a"), false)];
        let d = grid_prove_identity(&ctx, &s, &w).unwrap();
        assert!(d.relation_count <= GroupDerivation::bound(4));
        let w = vec![(e("a"), true), (e("a"), true), (e("b"), false), (e("b"), false)];
        let d = grid_prove_identity(&ctx, &s, &w).unwrap();
        assert!(d.relation_count <= GroupDerivation::bound(4));
        let w = vec![(e("a"), true), (e("b"), false)];
        assert!(grid_prove_identity(&ctx, &s, &w).is_err());
    }
}
