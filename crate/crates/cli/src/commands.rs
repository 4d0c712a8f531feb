use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value as Json};

use dvfield::ctrexgame::{GameModel, Refutation};
use dvfield::dvmodel::DvModel;
use dvfield::inflator::{classify_tame, mutate_line, specialize_line, wres, Line, Specialization, TameClass, Window};
use dvfield::modelfile::{load_model, save_model};
use dvfield::newton::{count_roots_in_o, polygon, rolle_check, ValuedPoly};
use dvfield::parse::{parse_group_elem, parse_series, parse_series_list};
use dvfield::suites::{run_all, run_suite, SuiteReport};
use dvfield::{Error, HahnSeries, Result, Value};

use crate::args::{Cli, Command, GameArgs, GameCheck};
use crate::report::{Report, Witness};

pub struct Ctx {
    model: DvModel,
    path: Option<PathBuf>,
}

impl Ctx {
    pub fn load(cli: &Cli) -> Result<Self> {
        let mut model = match &cli.model {
            Some(p) => load_model(p)?,
            None => DvModel::partial_zero(),
        };
        if let Some(p) = &cli.precision {
            model.set_precision(parse_group_elem(p, model.rank())?)?;
        }
        Ok(Self { model, path: cli.model.clone() })
    }

    fn series(&self, s: &str) -> Result<HahnSeries> {
        let x = parse_series(s, self.model.rank())?;
        self.model.check_series(&x)?;
        Ok(x)
    }

    fn line(&self, s: &str) -> Result<Line> {
        let coords = parse_series_list(s, self.model.rank())?;
        for c in &coords {
            self.model.check_series(c)?;
        }
        Line::new(coords)
    }

    fn report(&self, operation: &'static str, inputs: Map<String, Json>, output: Json) -> Report {
        Report {
            operation,
            inputs,
            output,
            witness_ledger: Vec::new(),
            precision_used: self.model.precision().to_string(),
            grown_model: None,
        }
    }

    /// Records generators adjoined since `before` and writes the grown model
    /// next to the input file.
    fn grown(&self, mut r: Report, before: usize) -> Result<Report> {
        let added = &self.model.generators()[before..];
        r.witness_ledger = added.iter().map(Witness::from).collect();
        if !added.is_empty() {
            if let Some(p) = &self.path {
                let out = sibling(p);
                save_model(&self.model, &out)?;
                r.grown_model = Some(out.display().to_string());
            }
        }
        Ok(r)
    }
}

/// `model.toml` → `model.grown.toml` in the same directory.
pub fn sibling(p: &Path) -> PathBuf {
    let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "model".into());
    p.with_file_name(format!("{stem}.grown.toml"))
}

fn inputs(pairs: &[(&str, &str)]) -> Map<String, Json> {
    pairs.iter().map(|(k, v)| (k.to_string(), Json::String(v.to_string()))).collect()
}

fn value(v: &Value) -> Json {
    Json::String(v.to_string())
}

fn spec_json(s: &Specialization) -> Json {
    json!({
        "basis": s.space.basis().iter().map(|v| v.iter().map(|d| d.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "dim": s.space.dim(),
        "complete": s.space.is_complete(),
        "method": s.method,
        "witnesses": s.witnesses.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
    })
}

pub fn run(cli: &Cli) -> Result<Report> {
    let mut ctx = Ctx::load(cli)?;
    match &cli.command {
        Command::Eval { series } => {
            let x = ctx.series(series)?;
            let out = json!({
                "series": x.to_string(),
                "val": x.val().ok().map(|v| v.to_string()),
                "exact": x.is_exact(),
                "precision": x.precision().map(|p| p.to_string()),
            });
            Ok(ctx.report("eval", inputs(&[("series", series)]), out))
        }
        Command::Val { series } => {
            let x = ctx.series(series)?;
            Ok(ctx.report("val", inputs(&[("series", series)]), json!({ "val": value(&x.val()?) })))
        }
        Command::Res { series } => {
            let x = ctx.series(series)?;
            Ok(ctx.report("res", inputs(&[("series", series)]), json!({ "res": x.res()?.to_string() })))
        }
        Command::Wres { series } => {
            let x = ctx.series(series)?;
            let w = wres(&ctx.model, &x)?;
            Ok(ctx.report("wres", inputs(&[("series", series)]), json!({ "wres": w.to_string() })))
        }
        Command::Classify { series } => {
            let x = ctx.series(series)?;
            let tag = ctx.model.classify_ring(&x)?;
            let val_partial = if tag.in_o() { Some(ctx.model.val_partial(&x)?.to_string()) } else { None };
            let tame = classify_tame(&ctx.model, &x)?;
            let (probe, w) = match &tame {
                TameClass::InR(w) => (None, Some(w.to_string())),
                TameClass::TameViaProbe { probe, wres } => (Some(probe.to_string()), Some(wres.to_string())),
                TameClass::Wild => (None, None),
            };
            let out = json!({
                "ring": tag.name(),
                "val": value(&x.val()?),
                "val_partial": val_partial,
                "tame": tame.name(),
                "probe": probe,
                "wres": w,
            });
            Ok(ctx.report("classify", inputs(&[("series", series)]), out))
        }
        Command::Specialize { line } => {
            let l = ctx.line(line)?;
            let s = specialize_line(&ctx.model, &l, &Window::default_for(ctx.model.rank()))?;
            Ok(ctx.report("specialize", inputs(&[("line", line)]), spec_json(&s)))
        }
        Command::Mutate { base, arg } => {
            let (b, a) = (ctx.line(base)?, ctx.line(arg)?);
            let mu = mutate_line(&ctx.model, &b, &a, &Window::default_for(ctx.model.rank()))?;
            let mut out = spec_json(&mu.specialization);
            out["line"] = Json::String(mu.line.to_string());
            out["index_map"] = json!(mu.index_map);
            Ok(ctx.report("mutate", inputs(&[("base", base), ("arg", arg)]), out))
        }
        Command::Newton { poly } => {
            let p = ValuedPoly::new(parse_series_list(poly, ctx.model.rank())?)?;
            let np = polygon(&p)?;
            let out = json!({
                "vertices": np.vertices.iter().map(|(i, v)| json!([i, v.to_string()])).collect::<Vec<_>>(),
                "segments": np.segments.iter().map(|s| json!({
                    "slope": s.slope.to_string(),
                    "length": s.length,
                    "root_valuation": s.root_valuation().to_string(),
                })).collect::<Vec<_>>(),
                "roots_in_O": count_roots_in_o(&p)?,
            });
            Ok(ctx.report("newton", inputs(&[("poly", poly)]), out))
        }
        Command::Rolle { poly, center, radius } => {
            let p = ValuedPoly::new(parse_series_list(poly, ctx.model.rank())?)?;
            let c = ctx.series(center)?;
            let r = parse_group_elem(radius, ctx.model.rank())?;
            let v = rolle_check(&p, &c, &r)?;
            let out = json!({
                "roots_in_ball": v.roots_in_ball,
                "derivative_roots_in_ball": v.derivative_roots_in_ball,
                "holds": v.holds(),
            });
            Ok(ctx.report("rolle", inputs(&[("poly", poly), ("center", center), ("radius", radius)]), out))
        }
        Command::Density { a, b, gamma } => {
            let (xa, xb) = (ctx.series(a)?, ctx.series(b)?);
            let g = parse_group_elem(gamma, ctx.model.rank())?;
            let before = ctx.model.generators().len();
            let w = ctx.model.solve_density(&xa, &xb, &g)?;
            let out = json!({
                "x": w.x.to_string(),
                "generator": format!("th{}", w.generator),
                "exponent": w.exponent.to_string(),
                "delta_x": ctx.model.delta(&w.x)?.to_string(),
            });
            let r = ctx.report("density", inputs(&[("a", a), ("b", b), ("gamma", gamma)]), out);
            ctx.grown(r, before)
        }
        Command::Reduce3 { a, b, c } => {
            let xs = [ctx.series(a)?, ctx.series(b)?, ctx.series(c)?];
            let before = ctx.model.generators().len();
            let r = ctx.model.reduce_triple([&xs[0], &xs[1], &xs[2]])?;
            let out = json!({
                "target": r.target,
                "first": r.first,
                "second": r.second,
                "q1": r.q1.to_string(),
                "rest": r.rest.to_string(),
                "q2": r.q2.as_ref().map(|q| q.to_string()),
                "relation": format!("x{} = ({})*x{} + ({})", r.target, r.q1, r.first, r.rest),
            });
            let rep = ctx.report("reduce3", inputs(&[("a", a), ("b", b), ("c", c)]), out);
            ctx.grown(rep, before)
        }
        Command::Game(g) => game(&ctx, g),
        Command::Check { suite } => {
            let reports = if suite == "all" { run_all(cli.seed) } else { vec![run_suite(suite, cli.seed)?] };
            let out = check_json(&reports);
            let mut inp = inputs(&[("suite", suite)]);
            inp.insert("seed".into(), json!(cli.seed));
            Ok(ctx.report("check", inp, out))
        }
    }
}

fn check_json(reports: &[SuiteReport]) -> Json {
    json!({
        "suites": reports,
        "cases": reports.iter().map(|r| r.cases).sum::<usize>(),
        "failures": reports.iter().map(|r| r.failures).sum::<usize>(),
        "skipped": reports.iter().map(|r| r.skipped).sum::<usize>(),
    })
}

fn game(ctx: &Ctx, g: &GameArgs) -> Result<Report> {
    let gm = GameModel::new(parse_series(&g.u, 2)?)?;
    let adversary = g.adversary.as_deref().ok_or_else(|| Error::Domain("game needs --adversary <series>".into()))?;
    let a_prime = parse_series(adversary, 2)?;
    let refutation = gm.sigma_refute(&a_prime)?;
    let mut inp = inputs(&[("u", &g.u), ("adversary", adversary)]);
    let precision = ctx.model.precision().to_string();
    let report = |operation, inputs, output| Report {
        operation,
        inputs,
        output,
        witness_ledger: Vec::new(),
        precision_used: precision.clone(),
        grown_model: None,
    };
    let tr = match refutation {
        Refutation::MatchedU => {
            let out = json!({ "outcome": "matched_u" });
            return Ok(report("game", inp, out));
        }
        Refutation::Certificate(tr) => tr,
    };
    match &g.check {
        None => {
            let (db, dc) = gm.partials(&tr)?;
            let out = json!({
                "outcome": "certificate",
                "a": tr.a.to_string(),
                "a_prime": tr.a_prime.to_string(),
                "val_diff": tr.val_diff.to_string(),
                "n": tr.n,
                "b": tr.b.to_string(),
                "c": tr.c.to_string(),
                "partial_b": db.to_string(),
                "partial_c": dc.to_string(),
            });
            Ok(report("game", inp, out))
        }
        Some(GameCheck::Check { bprime, cprime }) => {
            let (b, c) = (parse_series(bprime, 2)?, parse_series(cprime, 2)?);
            let v = gm.sigma_check_triple(&tr, &b, &c)?;
            inp.insert("bprime".into(), json!(bprime));
            inp.insert("cprime".into(), json!(cprime));
            let out = json!({
                "violated": v.index,
                "residual_val": v.residual_val.as_ref().map(|r| r.to_string()),
                "n": tr.n,
            });
            Ok(report("game_check", inp, out))
        }
    }
}
