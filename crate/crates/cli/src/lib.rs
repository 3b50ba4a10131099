//! Pipeline and exports behind the `thinfrac` binary.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use thinfrac_core::automaton::{build_automaton, parse_letters, render_word, CayleyMetric, GrowthMode};
use thinfrac_core::congruence::{CancellativityReport, Config};
use thinfrac_core::garside::{build_structure, find_minimal_garside, GarsideStructure};
use thinfrac_core::normal::{grid_prove_equality, Normalizer};
use thinfrac_core::report::Status;
use thinfrac_core::sampling::{random_equal_pair, rng};
use thinfrac_core::structure::{check_ore, enumerate_simples, is_spanning, primitive_closure, ElementSet};
use thinfrac_core::{fixture, parse_presentation, Error, MonoidContext, Presentation, Result};

/// Cap on the primitive closure computed by `analyze`.
pub const PRIMITIVE_CAP: usize = 1000;
/// Number of growth coefficients listed per Garside element.
pub const GROWTH_PREFIX: usize = 6;

#[derive(Debug, Clone, Copy)]
pub struct Bounds {
    pub radius: usize,
    /// mcm search bound; `None` means `2 × max relation length + 2`.
    pub bound: Option<usize>,
    pub garside_norm: usize,
    pub ball_cap: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            radius: 6,
            bound: None,
            garside_norm: 4,
            ball_cap: 100_000,
        }
    }
}

impl Bounds {
    pub fn mcm_bound(&self, p: &Presentation) -> usize {
        self.bound.unwrap_or(2 * p.max_relation_length() + 2)
    }
}

pub fn load(fixture_name: Option<&str>, file: Option<&Path>) -> Result<Presentation> {
    match (fixture_name, file) {
        (Some(name), None) => fixture(name),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Precondition(format!("{}: {e}", path.display())))?;
            let mut p = parse_presentation(&text)?;
            if p.name().is_none() {
                if let Some(stem) = path.file_stem() {
                    p.set_name(stem.to_string_lossy());
                }
            }
            Ok(p)
        }
        _ => Err(Error::Precondition("give exactly one of --fixture and --file".into())),
    }
}

pub fn context(p: Presentation, bounds: &Bounds) -> MonoidContext {
    let config = Config {
        max_ball_elements: bounds.ball_cap,
        ..Config::default()
    };
    MonoidContext::with_config(p, config)
}

#[derive(Debug, Clone, Serialize)]
pub struct StageError {
    pub stage: String,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct PrimitiveSummary {
    pub count: usize,
    pub members: Vec<String>,
    pub terminated: bool,
    pub incomplete_pairs: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct StructureSummary {
    pub delta: String,
    pub e: usize,
    pub atom_action: Vec<[String; 2]>,
    pub simples: usize,
    pub uniform_length: Status,
    pub unique: bool,
    pub unique_form_pairs: Status,
    pub growth: Vec<u64>,
}

/// Everything `analyze` computes for one presentation.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub name: String,
    pub presentation: String,
    pub bounds: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cancellativity: Option<CancellativityReport>,
    pub atoms: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub primitives: Option<PrimitiveSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thin: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spanning: Option<Status>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ore: Option<Status>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simples: Option<Vec<String>>,
    pub minimal_garside: Vec<String>,
    pub primitive_mcms: Vec<Value>,
    pub structures: Vec<StructureSummary>,
    pub errors: Vec<StageError>,
}

fn stage<T>(errors: &mut Vec<StageError>, name: &str, r: Result<T>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            errors.push(StageError {
                stage: name.into(),
                message: e.to_string(),
            });
            None
        }
    }
}

pub fn cmd_analyze(ctx: &MonoidContext, bounds: &Bounds) -> AnalysisReport {
    let p = ctx.presentation();
    let bound = bounds.mcm_bound(p);
    let mut errors = Vec::new();
    let cancellativity = stage(&mut errors, "cancellativity", ctx.check_cancellative_bounded(bounds.radius));
    let atoms = ctx.atoms().iter().map(|a| ctx.render(a)).collect();
    let closure = stage(&mut errors, "primitive_closure", primitive_closure(ctx, PRIMITIVE_CAP, bound));
    let mut report = AnalysisReport {
        name: p.name().unwrap_or("unnamed").to_string(),
        presentation: p.to_string(),
        bounds: json!({
            "radius": bounds.radius,
            "mcm_bound": bound,
            "garside_norm": bounds.garside_norm,
            "ball_cap": bounds.ball_cap,
        }),
        cancellativity,
        atoms,
        primitives: None,
        thin: None,
        spanning: None,
        ore: None,
        simples: None,
        minimal_garside: Vec::new(),
        primitive_mcms: Vec::new(),
        structures: Vec::new(),
        errors: Vec::new(),
    };
    if let Some(c) = &closure {
        report.primitives = Some(PrimitiveSummary {
            count: c.set.len(),
            members: c.set.render(ctx),
            terminated: c.terminated,
            incomplete_pairs: c.incomplete_pairs.len(),
        });
        let spans = stage(&mut errors, "is_spanning", is_spanning(ctx, &c.set, bound));
        report.spanning = spans.as_ref().map(|r| r.status);
        report.thin = spans.map(|r| r.passed() && c.is_thin());
        report.ore = stage(&mut errors, "check_ore", check_ore(ctx, &c.set, bound)).map(|r| r.status);
        if c.terminated {
            report.simples = stage(&mut errors, "enumerate_simples", enumerate_simples(ctx, &c.set)).map(|s| s.render(ctx));
        }
    }
    if let Some(search) = stage(
        &mut errors,
        "find_minimal_garside",
        find_minimal_garside(ctx, bounds.garside_norm, bound),
    ) {
        report.minimal_garside = search.minimal.iter().map(|x| ctx.render(x)).collect();
        report.primitive_mcms = search.to_json(ctx)["primitive_mcms"].as_array().cloned().unwrap_or_default();
        for delta in &search.minimal {
            let name = format!("structure {}", ctx.render(delta));
            let Some(gs) = stage(&mut errors, &name, build_structure(ctx, delta, bound)) else {
                continue;
            };
            if let Some(s) = stage(&mut errors, &name, summarize(ctx, &gs, bounds.radius, bound)) {
                report.structures.push(s);
            }
        }
    }
    report.errors = errors;
    report
}

fn summarize(ctx: &MonoidContext, gs: &GarsideStructure, radius: usize, bound: usize) -> Result<StructureSummary> {
    let uniform = gs.check_uniform_length(ctx, radius)?;
    let unique = uniform.details.as_ref().is_some_and(|d| d["unique"] == true);
    let pairs = gs.check_prop912(ctx, bound)?;
    let growth = build_automaton(ctx, gs).growth(GROWTH_PREFIX - 1, GrowthMode::Monoid, uniform.passed())?;
    Ok(StructureSummary {
        delta: ctx.render(&gs.delta),
        e: gs.order_e,
        atom_action: gs.atom_action(ctx).into_iter().map(|(a, b)| [a, b]).collect(),
        simples: gs.simples().len(),
        uniform_length: uniform.status,
        unique,
        unique_form_pairs: pairs.status,
        growth: growth.coefficients,
    })
}

fn status(s: Option<Status>) -> &'static str {
    match s {
        Some(Status::Pass) => "pass",
        Some(Status::Fail) => "fail",
        None => "not computed",
    }
}

impl AnalysisReport {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.name, self.presentation);
        if let Some(c) = &self.cancellativity {
            let _ = writeln!(s, "cancellative up to radius {}: {}", c.radius, status(Some(c.status)));
            if let Some(w) = &c.counterexample {
                let _ = writeln!(s, "  counterexample ({:?}): x={} y={} y'={}", w.side, w.x, w.y, w.y_prime);
            }
        }
        let _ = writeln!(s, "atoms: {}", self.atoms.join(", "));
        if let Some(p) = &self.primitives {
            let note = if p.terminated { "" } else { " (closure cut off)" };
            let _ = writeln!(s, "primitives ({}){note}: {}", p.count, p.members.join(", "));
        }
        let thin = match self.thin {
            Some(true) => "yes",
            Some(false) => "no",
            None => "not computed",
        };
        let _ = writeln!(s, "primitives span: {}; thin: {thin}", status(self.spanning));
        let _ = writeln!(s, "Ore condition on primitives: {}", status(self.ore));
        if let Some(simples) = &self.simples {
            let _ = writeln!(s, "simples ({}): {}", simples.len(), simples.join(", "));
        }
        let _ = writeln!(s, "minimal Garside elements: {}", list_or_none(&self.minimal_garside));
        for st in &self.structures {
            let action: Vec<String> = st.atom_action.iter().map(|[a, b]| format!("{a}->{b}")).collect();
            let _ = writeln!(
                s,
                "  Δ = {}: e = {}, φ: {}, {} simples, uniform length {}, unique {}, pairs check {}, growth {:?}",
                st.delta,
                st.e,
                action.join(" "),
                st.simples,
                status(Some(st.uniform_length)),
                st.unique,
                status(Some(st.unique_form_pairs)),
                st.growth
            );
        }
        for e in &self.errors {
            let _ = writeln!(s, "error in {}: {}", e.stage, e.message);
        }
        s
    }
}

fn list_or_none(xs: &[String]) -> String {
    if xs.is_empty() {
        "none".into()
    } else {
        xs.join(", ")
    }
}

/// The subgraph of the Cayley graph on S: an edge `x → x·g` labelled g
/// whenever both ends lie in S.
pub fn export_characteristic_graph(ctx: &MonoidContext, s: &ElementSet) -> String {
    let ids: Vec<_> = s.iter().collect();
    let mut out = String::from("digraph characteristic {\n");
    for (i, x) in ids.iter().enumerate() {
        let _ = writeln!(out, "  v{i} [label=\"{}\"];", ctx.render(x));
    }
    for (i, x) in ids.iter().enumerate() {
        for g in 0..ctx.rank() as u8 {
            let xg = ctx.mul(x, &ctx.generator(g));
            if let Some(j) = ids.iter().position(|y| **y == xg) {
                let _ = writeln!(out, "  v{i} -> v{j} [label=\"{}\"];", ctx.render(&ctx.generator(g)));
            }
        }
    }
    out.push_str("}\n");
    out
}

/// A comma-separated list of elements.
pub fn parse_set(ctx: &MonoidContext, text: &str) -> Result<ElementSet> {
    text.split(',')
        .map(str::trim)
        .map(|t| ctx.element(t))
        .collect::<Result<Vec<_>>>()
        .map(ElementSet::new)
}

pub fn primitives(ctx: &MonoidContext, bounds: &Bounds) -> Result<ElementSet> {
    let c = primitive_closure(ctx, PRIMITIVE_CAP, bounds.mcm_bound(ctx.presentation()))?;
    if !c.terminated {
        return Err(Error::ResourceLimit {
            what: "primitive closure".into(),
            level: PRIMITIVE_CAP,
        });
    }
    Ok(c.set)
}

/// The given set, else P_M; checked to span.
pub fn spanning_set(ctx: &MonoidContext, set: Option<&str>, bounds: &Bounds) -> Result<ElementSet> {
    let s = match set {
        Some(text) => parse_set(ctx, text)?,
        None => primitives(ctx, bounds)?,
    };
    let r = is_spanning(ctx, &s, bounds.mcm_bound(ctx.presentation()))?;
    if !r.passed() {
        return Err(Error::Precondition(format!(
            "{{{}}} does not span: {}",
            s.render(ctx).join(", "),
            r.witness.unwrap_or_default()
        )));
    }
    Ok(s)
}

/// The given Garside element, else the first minimal one.
pub fn garside(ctx: &MonoidContext, delta: Option<&str>, bounds: &Bounds) -> Result<GarsideStructure> {
    let bound = bounds.mcm_bound(ctx.presentation());
    let d = match delta {
        Some(text) => ctx.element(text)?,
        None => find_minimal_garside(ctx, bounds.garside_norm, bound)?
            .minimal
            .into_iter()
            .next()
            .ok_or_else(|| Error::Precondition(format!("no Garside element up to norm {}", bounds.garside_norm)))?,
    };
    build_structure(ctx, &d, bound)
}

/// Either S given explicitly, or Div(Δ) when a Garside element is named.
pub fn normalizer(ctx: &MonoidContext, set: Option<&str>, delta: Option<&str>, bounds: &Bounds) -> Result<Normalizer> {
    match (set, delta) {
        (Some(_), Some(_)) => Err(Error::Precondition("give at most one of --set and --delta".into())),
        (None, Some(_)) => {
            let gs = garside(ctx, delta, bounds)?;
            Normalizer::new(ctx, gs.div.clone())
        }
        _ => Normalizer::new(ctx, spanning_set(ctx, set, bounds)?),
    }
}

pub fn cmd_normalize(ctx: &MonoidContext, n: &Normalizer, element: &str, json_out: bool) -> Result<String> {
    let x = ctx.element(element)?;
    let f = n.normalize(ctx, &x).render(ctx);
    Ok(if json_out {
        json!({"element": ctx.render(&x), "normal_form": f}).to_string()
    } else {
        format!("({})", f.join(", "))
    })
}

pub fn cmd_all_normal_forms(ctx: &MonoidContext, n: &Normalizer, element: &str, json_out: bool) -> Result<String> {
    let x = ctx.element(element)?;
    let forms: Vec<Vec<String>> = n.normalize_all(ctx, &x)?.iter().map(|f| f.render(ctx)).collect();
    Ok(if json_out {
        json!({"element": ctx.render(&x), "normal_forms": forms}).to_string()
    } else {
        forms.iter().map(|f| format!("({})\n", f.join(", "))).collect::<String>()
    })
}

pub fn cmd_word_problem(ctx: &MonoidContext, gs: &GarsideStructure, u: &str, v: &str, json_out: bool) -> Result<String> {
    let p = ctx.presentation();
    let (wu, wv) = (p.parse_signed_word(u)?, p.parse_signed_word(v)?);
    let (fu, fv) = (gs.evaluate(ctx, &wu), gs.evaluate(ctx, &wv));
    let equal = fu == fv;
    let (nu, nv) = (gs.form(ctx, &fu), gs.form(ctx, &fv));
    Ok(if json_out {
        json!({
            "delta": ctx.render(&gs.delta),
            "equal": equal,
            "left": nu.to_json(ctx),
            "right": nv.to_json(ctx),
        })
        .to_string()
    } else {
        let show = |k: usize, f: &[String]| format!("Δ^-{k} · ({})", f.join(", "));
        format!(
            "{}\n  {} = {}\n  {} = {}\n",
            if equal { "equal" } else { "not equal" },
            u,
            show(nu.k, &nu.tail.render(ctx)),
            v,
            show(nv.k, &nv.tail.render(ctx))
        )
    })
}

pub fn cmd_automaton(ctx: &MonoidContext, gs: &GarsideStructure, json_out: bool, omit_failure: bool) -> String {
    let a = build_automaton(ctx, gs);
    if json_out {
        a.to_json(ctx).to_string()
    } else {
        a.to_dot(ctx, omit_failure)
    }
}

pub fn cmd_growth(ctx: &MonoidContext, gs: &GarsideStructure, n: usize, group: bool, radius: usize) -> Result<String> {
    let uniform = gs.check_uniform_length(ctx, radius)?.passed();
    let mode = if group { GrowthMode::Group } else { GrowthMode::Monoid };
    Ok(build_automaton(ctx, gs).growth(n, mode, uniform)?.to_csv())
}

pub fn cmd_distance(ctx: &MonoidContext, gs: &GarsideStructure, u: &str, v: &str) -> Result<String> {
    let a = build_automaton(ctx, gs);
    let m = CayleyMetric::new(ctx, gs, &a);
    let (lu, lv) = (parse_letters(ctx, gs, u)?, parse_letters(ctx, gs, v)?);
    Ok(format!("{}\n", m.synchronous_distance(&lu, &lv)?))
}

/// Grid proof of `u = v` for comma-separated words over S; with no words,
/// proves a random equal pair drawn with `seed`.
pub fn cmd_prove(
    ctx: &MonoidContext,
    s: &ElementSet,
    words: Option<(&str, &str)>,
    seed: u64,
    json_out: bool,
) -> Result<String> {
    let (u, v) = match words {
        Some((u, v)) => (parse_set_seq(ctx, u)?, parse_set_seq(ctx, v)?),
        None => random_equal_pair(ctx, s, 8, &mut rng(seed)),
    };
    let d = grid_prove_equality(ctx, s, &u, &v)?;
    let render = |xs: &[thinfrac_core::Element]| xs.iter().map(|x| ctx.render(x)).collect::<Vec<_>>();
    let steps: Vec<Value> = d
        .steps
        .iter()
        .map(|st| json!({"position": st.position, "lhs": render(&st.lhs), "rhs": render(&st.rhs)}))
        .collect();
    let bound = thinfrac_core::normal::Derivation::bound(u.len(), v.len());
    Ok(if json_out {
        json!({
            "source": render(&u),
            "target": render(&v),
            "steps": steps,
            "relation_count": d.relation_count,
            "bound": bound,
        })
        .to_string()
    } else {
        let mut out = format!("({}) = ({})\n", render(&u).join(", "), render(&v).join(", "));
        for st in &d.steps {
            let _ = writeln!(
                out,
                "  at {}: {} -> {}",
                st.position,
                render(&st.lhs).join(" "),
                render(&st.rhs).join(" ")
            );
        }
        let _ = writeln!(out, "relations: {} (bound {bound})", d.relation_count);
        out
    })
}

fn parse_set_seq(ctx: &MonoidContext, text: &str) -> Result<Vec<thinfrac_core::Element>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| ctx.element(t))
        .collect()
}

pub fn letters_display(ctx: &MonoidContext, gs: &GarsideStructure, text: &str) -> Result<Vec<String>> {
    Ok(render_word(ctx, &parse_letters(ctx, gs, text)?))
}

/// 2 for resource caps, 1 for everything else.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResourceLimit { .. } => 2,
        _ => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(name: &str) -> MonoidContext {
        context(fixture(name).unwrap(), &Bounds::default())
    }

    #[test]
    fn characteristic_graphs() {
        let m1 = ctx("M1");
        let s = parse_set(&m1, "1, a, b, aa, ab").unwrap();
        let dot = export_characteristic_graph(&m1, &s);
        assert_eq!(dot.matches("label=").count() - 5, 6);
        let b3 = ctx("B3");
        let s = parse_set(&b3, "1, s1, s2, s1s2, s2s1").unwrap();
        let dot = export_characteristic_graph(&b3, &s);
        assert_eq!(dot.matches(" -> ").count(), 4);
        let f1 = ctx("free(1)");
        let s = parse_set(&f1, "1, a").unwrap();
        assert_eq!(export_characteristic_graph(&f1, &s).matches(" -> ").count(), 1);
    }

    #[test]
    fn analyze_fixtures() {
        let r = cmd_analyze(&ctx("M2"), &Bounds::default());
        assert_eq!(r.primitives.as_ref().unwrap().count, 4);
        assert_eq!(r.minimal_garside, ["aa", "ab", "ac"]);
        let orders: Vec<usize> = r.structures.iter().map(|s| s.e).collect();
        assert_eq!(orders, [1, 3, 3]);
        assert!(r.errors.is_empty());

        let r = cmd_analyze(&ctx("free(2)"), &Bounds::default());
        assert_eq!(r.ore, Some(Status::Fail));
        assert!(r.minimal_garside.is_empty());

        let r = cmd_analyze(&ctx("M3"), &Bounds::default());
        assert_eq!(r.primitives.as_ref().unwrap().count, 4);
        assert_eq!(r.simples.as_ref().unwrap().len(), 7);
        assert_eq!(r.minimal_garside, ["ac"]);
        assert!(r.structures[0].unique);
    }

    #[test]
    fn commands() {
        let m1 = ctx("M1");
        let b = Bounds::default();
        let n = normalizer(&m1, None, None, &b).unwrap();
        assert_eq!(cmd_all_normal_forms(&m1, &n, "aaaa", false).unwrap(), "(aa, aa)\n(ab, ab)\n");
        let gs = garside(&m1, Some("aa"), &b).unwrap();
        assert!(cmd_word_problem(&m1, &gs, "a^-1 b", "b^-1 a", false).unwrap().starts_with("equal"));
        assert_eq!(cmd_distance(&m1, &gs, "aa, aa", "ab, ab").unwrap(), "2\n");
        assert!(cmd_growth(&m1, &gs, 3, false, 4).unwrap().starts_with("n,c_n\n0,1\n1,4\n"));
        let s = spanning_set(&m1, Some("1, a, b, aa, ab"), &b).unwrap();
        assert!(cmd_prove(&m1, &s, Some(("aa", "b, b")), 0, false).unwrap().contains("relations: 1"));
        assert!(spanning_set(&m1, Some("1, a"), &b).is_err());
    }
}
