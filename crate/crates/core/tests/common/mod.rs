//! Brute-force oracles working on raw generator words, sharing no code with
//! the library beyond the parsed presentation.
#![allow(dead_code)]

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::rc::Rc;

use thinfrac_core::presentation::{Presentation, SignedWord};

pub type W = Vec<u8>;

pub struct Naive {
    rank: u8,
    rules: Vec<(W, W)>,
    classes: RefCell<HashMap<W, Rc<BTreeSet<W>>>>,
}

impl Naive {
    pub fn new(p: &Presentation) -> Self {
        let mut rules = Vec::new();
        for r in p.relations() {
            rules.push((r.lhs.letters().to_vec(), r.rhs.letters().to_vec()));
            rules.push((r.rhs.letters().to_vec(), r.lhs.letters().to_vec()));
        }
        Naive {
            rank: p.rank() as u8,
            rules,
            classes: RefCell::new(HashMap::new()),
        }
    }

    pub fn rank(&self) -> u8 {
        self.rank
    }

    /// Every word equal to `w`, by breadth-first rewriting.
    pub fn class(&self, w: &[u8]) -> Rc<BTreeSet<W>> {
        if let Some(c) = self.classes.borrow().get(w) {
            return c.clone();
        }
        let mut seen = BTreeSet::from([w.to_vec()]);
        let mut queue = VecDeque::from([w.to_vec()]);
        while let Some(u) = queue.pop_front() {
            for (l, r) in &self.rules {
                if l.len() > u.len() {
                    continue;
                }
                for i in 0..=u.len() - l.len() {
                    if &u[i..i + l.len()] == l.as_slice() {
                        let mut v = u[..i].to_vec();
                        v.extend_from_slice(r);
                        v.extend_from_slice(&u[i + l.len()..]);
                        if seen.insert(v.clone()) {
                            queue.push_back(v);
                        }
                    }
                }
            }
        }
        let c = Rc::new(seen);
        let mut cache = self.classes.borrow_mut();
        for u in c.iter() {
            cache.insert(u.clone(), c.clone());
        }
        c
    }

    /// Lex-least word of the class.
    pub fn rep(&self, w: &[u8]) -> W {
        self.class(w).iter().next().unwrap().clone()
    }

    pub fn eq(&self, a: &[u8], b: &[u8]) -> bool {
        a.len() == b.len() && self.class(a).contains(b)
    }

    pub fn cat(&self, a: &[u8], b: &[u8]) -> W {
        let mut w = a.to_vec();
        w.extend_from_slice(b);
        w
    }

    /// `Some(rep of x\y)` when `x ⪯ y`.
    pub fn left_divides(&self, x: &[u8], y: &[u8]) -> Option<W> {
        if x.len() > y.len() {
            return None;
        }
        let cx = self.class(x);
        self.class(y)
            .iter()
            .find(|w| cx.contains(&w[..x.len()]))
            .map(|w| self.rep(&w[x.len()..]))
    }

    pub fn right_divides(&self, x: &[u8], y: &[u8]) -> Option<W> {
        if x.len() > y.len() {
            return None;
        }
        let cx = self.class(x);
        let k = y.len() - x.len();
        self.class(y)
            .iter()
            .find(|w| cx.contains(&w[k..]))
            .map(|w| self.rep(&w[..k]))
    }

    pub fn divisors(&self, x: &[u8]) -> BTreeSet<W> {
        let mut out = BTreeSet::new();
        for w in self.class(x).iter() {
            for i in 0..=w.len() {
                out.insert(self.rep(&w[..i]));
            }
        }
        out
    }

    pub fn right_divisors(&self, x: &[u8]) -> BTreeSet<W> {
        let mut out = BTreeSet::new();
        for w in self.class(x).iter() {
            for i in 0..=w.len() {
                out.insert(self.rep(&w[i..]));
            }
        }
        out
    }

    pub fn words(&self, n: usize) -> Vec<W> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (0..self.rank).map(move |g| {
                        let mut v = w.clone();
                        v.push(g);
                        v
                    })
                })
                .collect();
        }
        out
    }

    /// Representatives of all elements of norm exactly n.
    pub fn sphere(&self, n: usize) -> BTreeSet<W> {
        self.words(n).iter().map(|w| self.rep(w)).collect()
    }

    pub fn ball(&self, n: usize) -> Vec<W> {
        (0..=n).flat_map(|k| self.sphere(k)).collect()
    }

    pub fn atoms(&self) -> BTreeSet<W> {
        self.sphere(1)
    }

    /// mcms of x and y among elements of norm at most `bound`.
    pub fn mcms(&self, x: &[u8], y: &[u8], bound: usize) -> BTreeSet<W> {
        let common: Vec<W> = self
            .ball(bound)
            .into_iter()
            .filter(|z| self.left_divides(x, z).is_some() && self.left_divides(y, z).is_some())
            .collect();
        common
            .iter()
            .filter(|z| {
                !common
                    .iter()
                    .any(|w| w.len() < z.len() && self.left_divides(w, z).is_some())
            })
            .cloned()
            .collect()
    }

    /// Closure of the atoms and 1 under mcm complements.
    pub fn primitive_closure(&self, bound: usize) -> BTreeSet<W> {
        let mut s: BTreeSet<W> = self.atoms();
        s.insert(Vec::new());
        loop {
            let mut added = Vec::new();
            for x in &s {
                for y in &s {
                    for z in self.mcms(x, y, bound) {
                        let c = self.left_divides(x, &z).unwrap();
                        if !s.contains(&c) {
                            added.push(c);
                        }
                    }
                }
            }
            if added.is_empty() {
                return s;
            }
            s.extend(added);
        }
    }

    fn sig(&self, x: &[u8], s: &BTreeSet<W>) -> BTreeSet<W> {
        self.divisors(x).into_iter().filter(|d| s.contains(d)).collect()
    }

    /// S-simple elements of norm at most n: no proper divisor has the same
    /// divisors in S.
    pub fn simples(&self, s: &BTreeSet<W>, n: usize) -> BTreeSet<W> {
        self.ball(n)
            .into_iter()
            .filter(|x| {
                let sx = self.sig(x, s);
                self.divisors(x).iter().all(|y| y == x || self.sig(y, s) != sx)
            })
            .collect()
    }

    /// Condition of spanning with common multiples up to norm `bound`.
    pub fn spans(&self, s: &BTreeSet<W>, bound: usize) -> bool {
        if !s.contains(&Vec::new()) || !self.atoms().is_subset(s) {
            return false;
        }
        let ball = self.ball(bound);
        for x in s {
            for y in s {
                for z in &ball {
                    if self.left_divides(x, z).is_none() || self.left_divides(y, z).is_none() {
                        continue;
                    }
                    let found = s.iter().any(|yp| {
                        let m = self.cat(x, yp);
                        self.left_divides(&m, z).is_some() && s.iter().any(|xp| self.eq(&m, &self.cat(y, xp)))
                    });
                    if !found {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Prenormality by definition with respect to S.
    pub fn prenormal(&self, seq: &[W], s: &BTreeSet<W>) -> bool {
        (0..seq.len()).all(|i| {
            let tail: W = seq[i..].concat();
            self.sig(&seq[i], s) == self.sig(&tail, s)
        })
    }

    /// Shortest u with `x ⪯ y·u`, together with v where `y·u = x·v`.
    pub fn common_multiple(&self, y: &[u8], x: &[u8], max_len: usize) -> (W, W) {
        for l in 0..=max_len {
            for u in self.words(l) {
                let yu = self.cat(y, &u);
                if let Some(v) = self.left_divides(x, &yu) {
                    return (u, v);
                }
            }
        }
        panic!("no common multiple within {max_len} letters");
    }

    /// A signed word as a right fraction `P·N⁻¹`.
    pub fn right_fraction(&self, w: &SignedWord) -> (W, W) {
        let mut p: W = Vec::new();
        let mut n: W = Vec::new();
        for l in &w.0 {
            if l.inverse {
                n.insert(0, l.generator);
            } else {
                // N⁻¹g = g'N'⁻¹ with N·g' = g·N'.
                let (gp, np) = self.common_multiple(&n, &[l.generator], 10);
                p.extend(gp);
                n = self.rep(&np);
            }
            p = self.rep(&p);
            n = self.rep(&n);
        }
        (p, n)
    }

    /// `P₁N₁⁻¹ = P₂N₂⁻¹` iff `P₁u = P₂v` for one common multiple `N₁u = N₂v`.
    pub fn group_eq(&self, a: &SignedWord, b: &SignedWord) -> bool {
        let (p1, n1) = self.right_fraction(a);
        let (p2, n2) = self.right_fraction(b);
        let (u, v) = self.common_multiple(&n1, &n2, 12);
        self.eq(&self.cat(&p1, &u), &self.cat(&p2, &v))
    }
}
