//! Word equality, canonical forms and divisibility by closure of congruence
//! classes. Homogeneity keeps every class finite.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use parking_lot::RwLock;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::presentation::{Presentation, Word};

/// A monoid element, stored as the lex-least word of its class.
///
/// Elements order by norm first and then lexicographically (shortlex).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Element {
    canon: Word,
}

impl Element {
    pub fn identity() -> Self {
        Element { canon: Word::empty() }
    }

    pub(crate) fn from_canon(canon: Word) -> Self {
        Element { canon }
    }

    pub fn canon(&self) -> &Word {
        &self.canon
    }

    pub fn norm(&self) -> usize {
        self.canon.len()
    }

    pub fn is_identity(&self) -> bool {
        self.canon.is_empty()
    }
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canon
            .len()
            .cmp(&other.canon.len())
            .then_with(|| self.canon.letters().cmp(other.canon.letters()))
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Config {
    /// Cap on the total number of words held in cached classes.
    pub max_cached_words: usize,
    /// Cap on the number of elements on one ball level.
    pub max_ball_elements: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_cached_words: 1_000_000,
            max_ball_elements: 100_000,
        }
    }
}

#[derive(Default)]
struct Cache {
    class_id: HashMap<Vec<u8>, usize>,
    classes: Vec<Arc<Vec<Word>>>,
    words: usize,
    ball: Vec<Arc<Vec<Element>>>,
    divisors: HashMap<Element, Arc<BTreeSet<Element>>>,
    right_divisors: HashMap<Element, Arc<BTreeSet<Element>>>,
    right_multiples: HashMap<Element, Vec<Arc<BTreeSet<Element>>>>,
}

/// A presentation together with memoized classes, balls and divisor sets.
pub struct MonoidContext {
    presentation: Presentation,
    rules: Vec<(Vec<u8>, Vec<u8>)>,
    config: Config,
    cache: RwLock<Cache>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CancelCounterexample {
    pub side: Side,
    pub x: String,
    pub y: String,
    pub y_prime: String,
}

/// Outcome of the bounded cancellativity check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CancellativityReport {
    pub status: crate::report::Status,
    pub radius: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CancelCounterexample>,
}

impl MonoidContext {
    pub fn new(presentation: Presentation) -> Self {
        Self::with_config(presentation, Config::default())
    }

    pub fn with_config(presentation: Presentation, config: Config) -> Self {
        let mut rules = Vec::new();
        for r in presentation.relations() {
            rules.push((r.lhs.letters().to_vec(), r.rhs.letters().to_vec()));
            rules.push((r.rhs.letters().to_vec(), r.lhs.letters().to_vec()));
        }
        MonoidContext {
            presentation,
            rules,
            config,
            cache: RwLock::new(Cache::default()),
        }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn config(&self) -> Config {
        self.config
    }

    pub fn rank(&self) -> usize {
        self.presentation.rank()
    }

    pub fn render(&self, x: &Element) -> String {
        self.presentation.render(x.canon())
    }

    /// Parses a word in the presentation's alphabet and canonicalizes it.
    pub fn element(&self, text: &str) -> Result<Element> {
        Ok(self.canonical(&self.presentation.parse_word(text)?))
    }

    pub fn generator(&self, g: u8) -> Element {
        self.canonical(&Word::letter(g))
    }

    pub fn cached_words(&self) -> usize {
        self.cache.read().words
    }

    fn class_index(&self, w: &[u8]) -> usize {
        if let Some(&id) = self.cache.read().class_id.get(w) {
            return id;
        }
        let members = self.closure(w);
        let mut cache = self.cache.write();
        if let Some(&id) = cache.class_id.get(w) {
            return id;
        }
        let id = cache.classes.len();
        cache.words += members.len();
        for m in &members {
            cache.class_id.insert(m.letters().to_vec(), id);
        }
        cache.classes.push(Arc::new(members));
        id
    }

    fn closure(&self, w: &[u8]) -> Vec<Word> {
        let mut seen: HashSet<Vec<u8>> = HashSet::new();
        seen.insert(w.to_vec());
        let mut frontier = vec![w.to_vec()];
        while let Some(cur) = frontier.pop() {
            for (l, r) in &self.rules {
                if l.len() > cur.len() {
                    continue;
                }
                for i in 0..=cur.len() - l.len() {
                    if &cur[i..i + l.len()] == l.as_slice() {
                        let mut next = cur.clone();
                        next[i..i + l.len()].copy_from_slice(r);
                        if seen.insert(next.clone()) {
                            frontier.push(next);
                        }
                    }
                }
            }
        }
        let mut out: Vec<Word> = seen.into_iter().map(Word::new).collect();
        out.sort();
        out
    }

    /// All words congruent to `w`, sorted lexicographically.
    pub fn congruence_class(&self, w: &Word) -> Arc<Vec<Word>> {
        let id = self.class_index(w.letters());
        self.cache.read().classes[id].clone()
    }

    pub fn canonical(&self, w: &Word) -> Element {
        if w.is_empty() {
            return Element::identity();
        }
        Element::from_canon(self.congruence_class(w)[0].clone())
    }

    pub fn equal(&self, u: &Word, v: &Word) -> bool {
        if u.len() != v.len() {
            return false;
        }
        if u == v {
            return true;
        }
        self.class_index(u.letters()) == self.class_index(v.letters())
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        if x.is_identity() {
            return y.clone();
        }
        if y.is_identity() {
            return x.clone();
        }
        self.canonical(&x.canon.concat(&y.canon))
    }

    pub fn product<'a>(&self, xs: impl IntoIterator<Item = &'a Element>) -> Element {
        let mut w = Word::empty();
        for x in xs {
            w = w.concat(x.canon());
        }
        self.canonical(&w)
    }

    /// If `x ⪯ y`, the lex-least `z` with `y = x·z`.
    pub fn left_divides(&self, x: &Element, y: &Element) -> Option<Element> {
        let n = x.norm();
        if n > y.norm() {
            return None;
        }
        if n == 0 {
            return Some(y.clone());
        }
        if n == y.norm() {
            return (x == y).then(Element::identity);
        }
        let class = self.congruence_class(y.canon());
        let xid = self.class_index(x.canon.letters());
        class
            .iter()
            .filter(|w| self.class_index(&w.letters()[..n]) == xid)
            .map(|w| self.canonical(&w.suffix_from(n)))
            .min()
    }

    /// If `x` is a right divisor of `y`, the lex-least `z` with `y = z·x`.
    pub fn right_divides(&self, x: &Element, y: &Element) -> Option<Element> {
        let n = x.norm();
        let m = y.norm();
        if n > m {
            return None;
        }
        if n == 0 {
            return Some(y.clone());
        }
        if n == m {
            return (x == y).then(Element::identity);
        }
        let class = self.congruence_class(y.canon());
        let xid = self.class_index(x.canon.letters());
        class
            .iter()
            .filter(|w| self.class_index(&w.letters()[m - n..]) == xid)
            .map(|w| self.canonical(&w.prefix(m - n)))
            .min()
    }

    /// The left divisors of `x`.
    pub fn divisors(&self, x: &Element) -> Arc<BTreeSet<Element>> {
        if let Some(d) = self.cache.read().divisors.get(x) {
            return d.clone();
        }
        let class = self.congruence_class(x.canon());
        let mut out = BTreeSet::new();
        for w in class.iter() {
            for i in 0..=w.len() {
                out.insert(self.canonical(&w.prefix(i)));
            }
        }
        let out = Arc::new(out);
        self.cache.write().divisors.insert(x.clone(), out.clone());
        out
    }

    /// The right divisors of `x`.
    pub fn right_divisors(&self, x: &Element) -> Arc<BTreeSet<Element>> {
        if let Some(d) = self.cache.read().right_divisors.get(x) {
            return d.clone();
        }
        let class = self.congruence_class(x.canon());
        let mut out = BTreeSet::new();
        for w in class.iter() {
            for i in 0..=w.len() {
                out.insert(self.canonical(&w.suffix_from(i)));
            }
        }
        let out = Arc::new(out);
        self.cache.write().right_divisors.insert(x.clone(), out.clone());
        out
    }

    /// Right multiples `x·w` with `|w| = m - |x|`.
    pub fn right_multiples(&self, x: &Element, m: usize) -> Result<Arc<BTreeSet<Element>>> {
        if m < x.norm() {
            return Ok(Arc::new(BTreeSet::new()));
        }
        let idx = m - x.norm();
        loop {
            let (have, last) = {
                let cache = self.cache.read();
                match cache.right_multiples.get(x) {
                    Some(levels) if levels.len() > idx => return Ok(levels[idx].clone()),
                    Some(levels) => (levels.len(), levels.last().cloned()),
                    None => (0, None),
                }
            };
            let next = match last {
                None => Arc::new(BTreeSet::from([x.clone()])),
                Some(prev) => {
                    let mut out = BTreeSet::new();
                    for c in prev.iter() {
                        for g in 0..self.rank() as u8 {
                            let mut w = c.canon.clone();
                            w.push(g);
                            out.insert(self.canonical(&w));
                        }
                    }
                    if out.len() > self.config.max_ball_elements {
                        return Err(Error::ResourceLimit {
                            what: "enumerating right multiples".into(),
                            level: x.norm() + have,
                        });
                    }
                    self.check_word_cap(x.norm() + have)?;
                    Arc::new(out)
                }
            };
            let mut cache = self.cache.write();
            let levels = cache.right_multiples.entry(x.clone()).or_default();
            if levels.len() == have {
                levels.push(next);
            }
        }
    }

    fn check_word_cap(&self, level: usize) -> Result<()> {
        if self.cache.read().words > self.config.max_cached_words {
            return Err(Error::ResourceLimit {
                what: "caching congruence classes".into(),
                level,
            });
        }
        Ok(())
    }

    /// Elements of norm exactly `n`, sorted.
    pub fn ball_level(&self, n: usize) -> Result<Arc<Vec<Element>>> {
        loop {
            let (have, last) = {
                let cache = self.cache.read();
                if cache.ball.len() > n {
                    return Ok(cache.ball[n].clone());
                }
                (cache.ball.len(), cache.ball.last().cloned())
            };
            let next = match last {
                None => vec![Element::identity()],
                Some(prev) => {
                    let mut out = BTreeSet::new();
                    for c in prev.iter() {
                        for g in 0..self.rank() as u8 {
                            let mut w = c.canon.clone();
                            w.push(g);
                            out.insert(self.canonical(&w));
                        }
                        if out.len() > self.config.max_ball_elements {
                            return Err(Error::ResourceLimit {
                                what: "enumerating the ball".into(),
                                level: have,
                            });
                        }
                    }
                    self.check_word_cap(have)?;
                    out.into_iter().collect()
                }
            };
            let mut cache = self.cache.write();
            if cache.ball.len() == have {
                cache.ball.push(Arc::new(next));
            }
        }
    }

    /// All elements of norm at most `n`, in shortlex order.
    pub fn enumerate_ball(&self, n: usize) -> Result<Vec<Element>> {
        let mut out = Vec::new();
        for k in 0..=n {
            out.extend(self.ball_level(k)?.iter().cloned());
        }
        Ok(out)
    }

    /// The norm-one elements, one per generator.
    pub fn atoms(&self) -> Vec<Element> {
        (0..self.rank() as u8).map(|g| self.generator(g)).collect()
    }

    /// Checks left and right cancellation for all `x, y, y'` with
    /// `|x| + |y| <= n`.
    pub fn check_cancellative_bounded(&self, n: usize) -> Result<CancellativityReport> {
        let ball = self.enumerate_ball(n)?;
        for side in [Side::Left, Side::Right] {
            for x in ball.iter().filter(|x| !x.is_identity()) {
                let mut seen: HashMap<Element, &Element> = HashMap::new();
                for y in ball.iter().take_while(|y| y.norm() + x.norm() <= n) {
                    let p = match side {
                        Side::Left => self.mul(x, y),
                        Side::Right => self.mul(y, x),
                    };
                    if let Some(prev) = seen.get(&p) {
                        return Ok(CancellativityReport {
                            status: crate::report::Status::Fail,
                            radius: n,
                            counterexample: Some(CancelCounterexample {
                                side,
                                x: self.render(x),
                                y: self.render(y),
                                y_prime: self.render(prev),
                            }),
                        });
                    }
                    seen.insert(p, y);
                }
            }
        }
        Ok(CancellativityReport {
            status: crate::report::Status::Pass,
            radius: n,
            counterexample: None,
        })
    }
}
