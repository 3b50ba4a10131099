//! The Δ-normal-form automaton, growth series, and synchronous distances in
//! the Cayley graph of the group of fractions.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use parking_lot::RwLock;
use serde_json::{json, Value};

use crate::congruence::{Element, MonoidContext};
use crate::error::{Error, Result};
use crate::garside::{Fraction, GarsideStructure};
use crate::normal::NormalSequence;
use crate::report::{Report, Status};

pub const INITIAL: usize = 0;
pub const FAILURE: usize = 1;

/// Nodes kept in the cached identity ball used for distance queries.
pub const BALL_CAP: usize = 20_000;
/// Largest radius of the cached identity ball.
pub const BALL_RADIUS: usize = 6;
/// Nodes a single distance query may visit before giving up.
pub const SEARCH_CAP: usize = 400_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Simple(Element),
    DeltaInv,
}

impl Letter {
    pub fn render(&self, ctx: &MonoidContext) -> String {
        match self {
            Letter::Simple(x) => ctx.render(x),
            Letter::DeltaInv => "Δ⁻¹".to_string(),
        }
    }
}

/// Parses a comma-separated letter sequence. `Δ⁻¹`, `Δ^-1` and `D^-1` name
/// the inverse of Δ; anything else must be a non-identity Δ-simple.
pub fn parse_letters(ctx: &MonoidContext, gs: &GarsideStructure, text: &str) -> Result<Vec<Letter>> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if matches!(part, "Δ⁻¹" | "Δ^-1" | "D^-1" | "D-") {
            out.push(Letter::DeltaInv);
            continue;
        }
        let x = ctx.element(part)?;
        if x.is_identity() || !gs.simples().contains(&x) {
            return Err(Error::Precondition(format!("{part} is not a non-identity Δ-simple")));
        }
        out.push(Letter::Simple(x));
    }
    Ok(out)
}

pub fn letters_of(seq: &NormalSequence) -> Vec<Letter> {
    seq.factors.iter().cloned().map(Letter::Simple).collect()
}

/// Deterministic complete automaton. State 0 is initial, state 1 the
/// failure sink, state `2 + i` records that letter i was read last.
#[derive(Debug, Clone)]
pub struct Automaton {
    letters: Vec<Letter>,
    delta: usize,
    delta_inv: usize,
    table: Vec<Vec<usize>>,
}

pub fn build_automaton(ctx: &MonoidContext, gs: &GarsideStructure) -> Automaton {
    let mut letters: Vec<Letter> = gs
        .simples()
        .iter()
        .filter(|x| !x.is_identity())
        .cloned()
        .map(Letter::Simple)
        .collect();
    letters.push(Letter::DeltaInv);
    let delta_inv = letters.len() - 1;
    let delta = letters
        .iter()
        .position(|l| *l == Letter::Simple(gs.delta.clone()))
        .expect("Δ is simple");
    let n = letters.len();
    let state = |i: usize| i + 2;
    let mut table = vec![vec![FAILURE; n]; n + 2];
    table[INITIAL] = (0..n).map(state).collect();
    for y in 0..n {
        for x in 0..n {
            let to = if y == delta {
                if x == delta_inv { FAILURE } else { state(x) }
            } else if y == delta_inv {
                if x == delta { FAILURE } else { state(x) }
            } else if x == delta || x == delta_inv {
                FAILURE
            } else {
                match (&letters[y], &letters[x]) {
                    (Letter::Simple(a), Letter::Simple(b)) if gs.normalizer().covers(ctx, a, b) => state(x),
                    _ => FAILURE,
                }
            };
            table[state(y)][x] = to;
        }
    }
    Automaton {
        letters,
        delta,
        delta_inv,
        table,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthMode {
    /// Words without Δ⁻¹, counting monoid elements.
    Monoid,
    /// All accepted words, counting group elements.
    Group,
}

/// Counts of accepted words by length, with the recurrence given by the
/// characteristic polynomial of the transfer matrix on live states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthSeries {
    pub mode: GrowthMode,
    pub coefficients: Vec<u64>,
    /// `p₁..p_d` with `c_n + p₁c_{n−1} + … + p_d c_{n−d} = 0` for `n ≥ d`.
    pub recurrence: Option<Vec<i128>>,
    /// False when normal forms may have different lengths, in which case the
    /// coefficients count words rather than elements.
    pub counts_elements: bool,
}

impl GrowthSeries {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,c_n\n");
        for (n, c) in self.coefficients.iter().enumerate() {
            let _ = writeln!(s, "{n},{c}");
        }
        s
    }

    /// Checks the recurrence against the stored coefficients.
    pub fn recurrence_holds(&self) -> Option<bool> {
        let p = self.recurrence.as_ref()?;
        let d = p.len();
        let c: Vec<i128> = self.coefficients.iter().map(|&x| x as i128).collect();
        Some((d..c.len()).all(|n| c[n] + (1..=d).map(|i| p[i - 1] * c[n - i]).sum::<i128>() == 0))
    }
}

impl Automaton {
    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn state_count(&self) -> usize {
        self.table.len()
    }

    pub fn delta_letter(&self) -> usize {
        self.delta
    }

    pub fn delta_inv_letter(&self) -> usize {
        self.delta_inv
    }

    pub fn letter_index(&self, l: &Letter) -> Option<usize> {
        self.letters.iter().position(|m| m == l)
    }

    pub fn step(&self, state: usize, letter: usize) -> usize {
        self.table[state][letter]
    }

    pub fn run(&self, word: &[usize]) -> usize {
        word.iter().fold(INITIAL, |s, &l| self.step(s, l))
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        self.run(word) != FAILURE
    }

    pub fn accepts_letters(&self, word: &[Letter]) -> bool {
        let idx: Option<Vec<usize>> = word.iter().map(|l| self.letter_index(l)).collect();
        idx.is_some_and(|w| self.accepts(&w))
    }

    fn state_name(&self, ctx: &MonoidContext, s: usize) -> String {
        match s {
            INITIAL => "1".to_string(),
            FAILURE => "⊥".to_string(),
            _ => self.letters[s - 2].render(ctx),
        }
    }

    /// Accepted words of exactly `len` letters, in lex order of indices.
    pub fn accepted_words(&self, len: usize, mode: GrowthMode) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut stack = vec![(INITIAL, Vec::new())];
        while let Some((s, w)) = stack.pop() {
            if w.len() == len {
                out.push(w);
                continue;
            }
            for l in (0..self.letters.len()).rev() {
                if mode == GrowthMode::Monoid && l == self.delta_inv {
                    continue;
                }
                let t = self.step(s, l);
                if t != FAILURE {
                    let mut w2 = w.clone();
                    w2.push(l);
                    stack.push((t, w2));
                }
            }
        }
        out
    }

    /// The group element read by a word.
    pub fn value(&self, ctx: &MonoidContext, gs: &GarsideStructure, word: &[usize]) -> Fraction {
        let mut f = Fraction::identity();
        for &l in word {
            f = letter_mul(ctx, gs, &f, &self.letters[l]);
        }
        f
    }

    fn transfer(&self, mode: GrowthMode) -> Vec<Vec<u64>> {
        let live: Vec<usize> = (0..self.table.len()).filter(|&s| s != FAILURE).collect();
        let pos: HashMap<usize, usize> = live.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut m = vec![vec![0u64; live.len()]; live.len()];
        for (i, &s) in live.iter().enumerate() {
            for (l, &t) in self.table[s].iter().enumerate() {
                if t == FAILURE || (mode == GrowthMode::Monoid && l == self.delta_inv) {
                    continue;
                }
                m[i][pos[&t]] += 1;
            }
        }
        m
    }

    /// Coefficients `c_0..c_{n_max}` by dynamic programming over states.
    pub fn growth(&self, n_max: usize, mode: GrowthMode, uniform_length: bool) -> Result<GrowthSeries> {
        let m = self.transfer(mode);
        let d = m.len();
        let mut v = vec![0u64; d];
        v[0] = 1;
        let mut coefficients = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let total = v
                .iter()
                .try_fold(0u64, |a, &b| a.checked_add(b))
                .ok_or_else(|| Error::ResourceLimit { what: "growth coefficient overflow".into(), level: n })?;
            coefficients.push(total);
            let mut next = vec![0u64; d];
            for (i, &vi) in v.iter().enumerate() {
                if vi == 0 {
                    continue;
                }
                for (j, &mij) in m[i].iter().enumerate() {
                    if mij != 0 {
                        next[j] = mij
                            .checked_mul(vi)
                            .and_then(|x| x.checked_add(next[j]))
                            .ok_or_else(|| Error::ResourceLimit { what: "growth coefficient overflow".into(), level: n + 1 })?;
                    }
                }
            }
            v = next;
        }
        Ok(GrowthSeries {
            mode,
            coefficients,
            recurrence: characteristic_polynomial(&m),
            counts_elements: uniform_length,
        })
    }

    pub fn to_dot(&self, ctx: &MonoidContext, omit_failure: bool) -> String {
        let mut s = String::from("digraph automaton {\n  rankdir=LR;\n");
        for q in 0..self.table.len() {
            if omit_failure && q == FAILURE {
                continue;
            }
            let shape = if q == FAILURE { "circle" } else { "doublecircle" };
            let _ = writeln!(s, "  q{q} [label=\"{}\", shape={shape}];", self.state_name(ctx, q));
        }
        for (q, row) in self.table.iter().enumerate() {
            for (l, &t) in row.iter().enumerate() {
                if omit_failure && (q == FAILURE || t == FAILURE) {
                    continue;
                }
                let _ = writeln!(s, "  q{q} -> q{t} [label=\"{}\"];", self.letters[l].render(ctx));
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self, ctx: &MonoidContext) -> Value {
        let transitions: Vec<Value> = self
            .table
            .iter()
            .enumerate()
            .flat_map(|(q, row)| row.iter().enumerate().map(move |(l, &t)| json!([q, l, t])))
            .collect();
        json!({
            "alphabet": self.letters.iter().map(|l| l.render(ctx)).collect::<Vec<_>>(),
            "states": (0..self.table.len()).map(|q| self.state_name(ctx, q)).collect::<Vec<_>>(),
            "initial": INITIAL,
            "failure": FAILURE,
            "accepting": (0..self.table.len()).filter(|&q| q != FAILURE).collect::<Vec<_>>(),
            "transitions": transitions,
        })
    }
}

/// Characteristic polynomial coefficients `p₁..p_d` by Faddeev–LeVerrier,
/// or None on overflow.
fn characteristic_polynomial(m: &[Vec<u64>]) -> Option<Vec<i128>> {
    let d = m.len();
    let a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let matmul = |x: &[Vec<i128>], y: &[Vec<i128>]| -> Option<Vec<Vec<i128>>> {
        let mut out = vec![vec![0i128; d]; d];
        for i in 0..d {
            for k in 0..d {
                if x[i][k] == 0 {
                    continue;
                }
                for j in 0..d {
                    out[i][j] = out[i][j].checked_add(x[i][k].checked_mul(y[k][j])?)?;
                }
            }
        }
        Some(out)
    };
    let mut p = Vec::with_capacity(d);
    let mut mk = vec![vec![0i128; d]; d];
    let mut c_prev = 1i128;
    for k in 1..=d {
        for (i, row) in mk.iter_mut().enumerate() {
            row[i] = row[i].checked_add(c_prev)?;
        }
        let amk = matmul(&a, &mk)?;
        let tr = (0..d).try_fold(0i128, |t, i| t.checked_add(amk[i][i]))?;
        let c = -tr / k as i128;
        p.push(c);
        c_prev = c;
        mk = amk;
    }
    Some(p)
}

fn letter_mul(ctx: &MonoidContext, gs: &GarsideStructure, f: &Fraction, l: &Letter) -> Fraction {
    match l {
        Letter::Simple(x) => gs.mul_element(ctx, f, x),
        Letter::DeltaInv => gs.mul_delta_inv(ctx, f),
    }
}

fn letter_mul_inv(ctx: &MonoidContext, gs: &GarsideStructure, f: &Fraction, l: &Letter) -> Fraction {
    match l {
        Letter::Simple(x) => gs.mul_element_inv(ctx, f, x),
        Letter::DeltaInv => gs.mul_element(ctx, f, &gs.delta),
    }
}

pub fn fraction_inverse(ctx: &MonoidContext, gs: &GarsideStructure, f: &Fraction) -> Fraction {
    let mut g = gs.mul_element_inv(ctx, &Fraction::identity(), &f.x);
    for _ in 0..f.k {
        g = gs.mul_element(ctx, &g, &gs.delta);
    }
    g
}

/// Word metric of the group of fractions for the generating set made of
/// the automaton letters and their inverses.
pub struct CayleyMetric<'a> {
    ctx: &'a MonoidContext,
    gs: &'a GarsideStructure,
    letters: Vec<Letter>,
    ball: RwLock<Option<(HashMap<Fraction, usize>, usize)>>,
}

impl<'a> CayleyMetric<'a> {
    pub fn new(ctx: &'a MonoidContext, gs: &'a GarsideStructure, automaton: &Automaton) -> Self {
        CayleyMetric {
            ctx,
            gs,
            letters: automaton.letters().to_vec(),
            ball: RwLock::new(None),
        }
    }

    fn neighbours(&self, f: &Fraction) -> Vec<Fraction> {
        let mut out = Vec::with_capacity(2 * self.letters.len());
        for l in &self.letters {
            out.push(letter_mul(self.ctx, self.gs, f, l));
            out.push(letter_mul_inv(self.ctx, self.gs, f, l));
        }
        out
    }

    fn ensure_ball(&self) {
        if self.ball.read().is_some() {
            return;
        }
        let mut dist = HashMap::from([(Fraction::identity(), 0usize)]);
        let mut frontier = vec![Fraction::identity()];
        let mut radius = 0;
        loop {
            let mut next = Vec::new();
            for f in &frontier {
                for g in self.neighbours(f) {
                    if !dist.contains_key(&g) {
                        dist.insert(g.clone(), radius + 1);
                        next.push(g);
                    }
                }
            }
            if next.is_empty() {
                radius = usize::MAX;
                break;
            }
            radius += 1;
            if dist.len() > BALL_CAP || radius >= BALL_RADIUS {
                break;
            }
            frontier = next;
        }
        *self.ball.write() = Some((dist, radius));
    }

    /// `|f|` in the word metric.
    pub fn length(&self, f: &Fraction) -> Result<usize> {
        self.ensure_ball();
        let guard = self.ball.read();
        let (ball, radius) = guard.as_ref().expect("ball built");
        if let Some(&d) = ball.get(f) {
            return Ok(d);
        }
        if *radius == usize::MAX {
            return Err(Error::Inconsistent("element outside a finite group".into()));
        }
        let r = *radius;
        let mut seen: HashSet<Fraction> = HashSet::from([f.clone()]);
        let mut frontier = vec![f.clone()];
        let mut best = usize::MAX;
        for j in 1.. {
            let mut next = Vec::new();
            for g in &frontier {
                for h in self.neighbours(g) {
                    if let Some(&d) = ball.get(&h) {
                        best = best.min(j + d);
                    }
                    if seen.insert(h.clone()) {
                        next.push(h);
                    }
                }
            }
            if best <= r + j + 1 {
                return Ok(best);
            }
            if seen.len() > SEARCH_CAP {
                return Err(Error::ResourceLimit { what: "Cayley distance search".into(), level: r + j });
            }
            frontier = next;
        }
        unreachable!()
    }

    pub fn distance(&self, g: &Fraction, h: &Fraction) -> Result<usize> {
        if g == h {
            return Ok(0);
        }
        let t = self.gs.mul_fraction(self.ctx, &fraction_inverse(self.ctx, self.gs, g), h);
        self.length(&t)
    }

    fn prefixes(&self, start: &Fraction, word: &[Letter]) -> Vec<Fraction> {
        let mut out = Vec::with_capacity(word.len());
        let mut f = start.clone();
        for l in word {
            f = letter_mul(self.ctx, self.gs, &f, l);
            out.push(f.clone());
        }
        out
    }

    /// Supremum over i of the distance between the i-th prefix products,
    /// the shorter word being padded with its full product.
    pub fn synchronous_distance(&self, u: &[Letter], v: &[Letter]) -> Result<usize> {
        self.translated_distance(&Fraction::identity(), u, v)
    }

    /// Synchronous distance between `t·u` and `v`, prefixwise: the supremum
    /// of `dist(t·u₁⋯u_i, v₁⋯v_i)`.
    pub fn translated_distance(&self, t: &Fraction, u: &[Letter], v: &[Letter]) -> Result<usize> {
        let pu = self.prefixes(t, u);
        let pv = self.prefixes(&Fraction::identity(), v);
        let n = u.len().max(v.len());
        let mut best = 0;
        for i in 0..n {
            let a = pu.get(i).or(pu.last()).cloned().unwrap_or_else(|| t.clone());
            let b = pv.get(i).or(pv.last()).cloned().unwrap_or_default();
            best = best.max(self.distance(&a, &b)?);
        }
        Ok(best)
    }
}

/// Every Δ-normal decomposition of a group element, as letter sequences.
pub fn group_forms(ctx: &MonoidContext, gs: &GarsideStructure, f: &Fraction) -> Result<Vec<Vec<Letter>>> {
    let forms = gs.normalizer().normalize_all(ctx, &f.x)?;
    Ok(forms
        .iter()
        .map(|s| {
            let mut w = vec![Letter::DeltaInv; f.k];
            w.extend(letters_of(s));
            w
        })
        .collect())
}

/// Fellow-traveller measurements on a ball of radius `radius`:
/// the distance between normal forms of one element against `2(k−1)`,
/// the translated distance for left multiplication by a letter against
/// `3k`, and the monoid left multiplication by a simple against 1.
pub fn ftp_probe(ctx: &MonoidContext, gs: &GarsideStructure, radius: usize) -> Result<Report> {
    let automaton = build_automaton(ctx, gs);
    let metric = CayleyMetric::new(ctx, gs, &automaton);
    let k = gs.k();
    let ball = ctx.enumerate_ball(radius)?;
    let simples: Vec<&Element> = gs.simples().iter().filter(|x| !x.is_identity()).collect();

    let mut multi = 0;
    for x in &ball {
        let forms = gs.normalizer().normalize_all(ctx, x)?;
        for (i, a) in forms.iter().enumerate() {
            for b in &forms[i + 1..] {
                multi = multi.max(metric.synchronous_distance(&letters_of(a), &letters_of(b))?);
            }
        }
    }

    let mut left = 0;
    let mut left_witness = Value::Null;
    for x in &ball {
        let mut zs = vec![Fraction { k: 0, x: x.clone() }];
        if ctx.left_divides(&gs.delta, x).is_none() {
            zs.push(Fraction { k: 1, x: x.clone() });
        }
        for z in &zs {
            let z_forms = group_forms(ctx, gs, z)?;
            for y in automaton.letters() {
                let yf = letter_mul(ctx, gs, &Fraction::identity(), y);
                let yz = gs.mul_fraction(ctx, &yf, z);
                let yz_forms = group_forms(ctx, gs, &yz)?;
                for zf in &z_forms {
                    let mut d = usize::MAX;
                    for w in &yz_forms {
                        d = d.min(metric.translated_distance(&yf, zf, w)?);
                    }
                    if d > left {
                        left = d;
                        left_witness = json!({"z": render_word(ctx, zf), "y": y.render(ctx)});
                    }
                }
            }
        }
    }

    let mut monoid = 0;
    let mut monoid_witness = Value::Null;
    for x in &ball {
        let x_forms = gs.normalizer().normalize_all(ctx, x)?;
        for y in &simples {
            let yf = Fraction { k: 0, x: (*y).clone() };
            let yx_forms = gs.normalizer().normalize_all(ctx, &ctx.mul(y, x))?;
            for xf in x_forms.iter() {
                let mut d = usize::MAX;
                for w in yx_forms.iter() {
                    d = d.min(metric.translated_distance(&yf, &letters_of(xf), &letters_of(w))?);
                }
                if d > monoid {
                    monoid = d;
                    monoid_witness = json!({"x": xf.render(ctx), "y": ctx.render(y)});
                }
            }
        }
    }

    let bounds = (2 * (k - 1), 3 * k, 1);
    let ok = multi <= bounds.0 && left <= bounds.1 && monoid <= bounds.2;
    Ok(Report::new("ftp", Status::from_bool(ok), radius, true).with_details(json!({
        "k": k,
        "elements": ball.len(),
        "multi_form": {"max": multi, "bound": bounds.0},
        "left_multiplication": {"max": left, "bound": bounds.1, "witness": left_witness},
        "monoid_left_multiplication": {"max": monoid, "bound": bounds.2, "witness": monoid_witness},
    })))
}

pub fn render_word(ctx: &MonoidContext, w: &[Letter]) -> Vec<String> {
    w.iter().map(|l| l.render(ctx)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::garside::build_structure;
    use crate::presentation::fixture;

    fn setup(name: &str, delta: &str) -> (MonoidContext, GarsideStructure) {
        let ctx = MonoidContext::new(fixture(name).unwrap());
        let gs = build_structure(&ctx, &ctx.element(delta).unwrap(), 6).unwrap();
        (ctx, gs)
    }

    #[test]
    fn table_examples() {
        let (ctx, gs) = setup("M1", "aa");
        let a = build_automaton(&ctx, &gs);
        let w = |s: &str| parse_letters(&ctx, &gs, s).unwrap();
        assert!(a.accepts_letters(&w("Δ⁻¹, ab")));
        assert!(!a.accepts_letters(&w("a, aa")));
        assert!(a.accepts_letters(&[]));
        assert!(a.accepts_letters(&w("aa, aa, a")));
        assert!(!a.accepts_letters(&w("ab, Δ⁻¹")));
        assert!(!a.accepts_letters(&w("Δ⁻¹, aa")));
        assert_eq!(a.state_count(), 2 + 5);
    }

    #[test]
    fn m1_growth() {
        let (ctx, gs) = setup("M1", "aa");
        let a = build_automaton(&ctx, &gs);
        let g = a.growth(8, GrowthMode::Monoid, true).unwrap();
        assert_eq!(&g.coefficients[..2], &[1, 4]);
        assert_eq!(g.recurrence_holds(), Some(true));
        assert!(g.to_csv().starts_with("n,c_n\n0,1\n1,4\n"));
        let g = a.growth(8, GrowthMode::Group, true).unwrap();
        assert_eq!(g.recurrence_holds(), Some(true));
    }

    #[test]
    fn char_poly_small() {
        // [[1,1],[1,0]] has λ² − λ − 1.
        assert_eq!(characteristic_polynomial(&[vec![1, 1], vec![1, 0]]), Some(vec![-1, -1]));
    }

    #[test]
    fn distances() {
        let (ctx, gs) = setup("M1", "aa");
        let a = build_automaton(&ctx, &gs);
        let m = CayleyMetric::new(&ctx, &gs, &a);
        let w = |s: &str| parse_letters(&ctx, &gs, s).unwrap();
        assert_eq!(m.synchronous_distance(&w("ab, a"), &w("ab, a")).unwrap(), 0);
        assert_eq!(m.synchronous_distance(&w("aa, aa"), &w("ab, ab")).unwrap(), 2);
        assert_eq!(m.synchronous_distance(&w("a"), &w("a, b")).unwrap(), 1);
    }

    #[test]
    fn dot_and_json() {
        let (ctx, gs) = setup("free_comm(2)", "ab");
        let a = build_automaton(&ctx, &gs);
        let full = a.to_dot(&ctx, false);
        let trimmed = a.to_dot(&ctx, true);
        assert!(full.contains("⊥") && !trimmed.contains("⊥"));
        let j = a.to_json(&ctx);
        assert_eq!(j["alphabet"].as_array().unwrap().len(), 4);
        assert_eq!(j["transitions"].as_array().unwrap().len(), 6 * 4);
    }

    #[test]
    fn ftp_m1() {
        let (ctx, gs) = setup("M1", "aa");
        let r = ftp_probe(&ctx, &gs, 3).unwrap();
        assert!(r.passed(), "{:?}", r.details);
        assert_eq!(r.details.unwrap()["multi_form"]["max"], 0);
    }
}
