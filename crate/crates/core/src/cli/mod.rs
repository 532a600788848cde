//! Command runner behind the `arlab` binary: reads an input document, dispatches to the
//! engines and renders a deterministic plain-text report.
//!
//! Exit codes: 0 all checks passed, 1 a check failed (the report lists `witness` lines),
//! 2 a computation budget ran out, 3 the input could not be used.

mod format;
mod input;

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::artin_rees::{containment_check, uniform_sweep, ArtinReesInstance, Witness};
use crate::complexes::{diamond_product, emit_complex, koszul_complex, pad_to_odd, GradedFreeComplex};
use crate::groebner::{Budget, Engine, GbError, SubmoduleSpec};
use crate::homotopy::{check_product_identity, koszul_truncation_defect, sample_points, PointFrame};
use crate::poly::{MonomialOrder, Polynomial};
use crate::residue::{
    ordered_product_action, residue_action, CutoffProfile, Estimate, ProductOrder, ResidueError,
};

pub use format::{parse_document, Block, BlockLine, Document, InputError, Item, KeyLine};
pub use input::{
    emit_complexes, emit_input, parse_complexes, parse_input, InputDoc, InstanceFile, ResidueFile, DEFAULT_MU_CAP,
    DEFAULT_R_MAX,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Command {
    Groebner,
    Koszul,
    Diamond,
    ArCheck,
    ArSweep,
    PointCheck,
    ResidueDemo,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Groebner,
        Command::Koszul,
        Command::Diamond,
        Command::ArCheck,
        Command::ArSweep,
        Command::PointCheck,
        Command::ResidueDemo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Groebner => "groebner",
            Command::Koszul => "koszul",
            Command::Diamond => "diamond",
            Command::ArCheck => "ar-check",
            Command::ArSweep => "ar-sweep",
            Command::PointCheck => "point-check",
            Command::ResidueDemo => "residue-demo",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command `{s}`"))
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_POINTS: usize = 25;
pub const MIN_GENERATOR_NORM: f64 = 0.1;
pub const SINGLE_TOL: f64 = 1e-8;
pub const PRODUCT_TOL: f64 = 1e-6;
/// Default for general complexes, whose `∂̄σ` comes from finite differences.
pub const FD_SINGLE_TOL: f64 = 1e-6;
pub const TRUNCATION_TOL: f64 = 1e-12;
pub const ASYMMETRY_RATIO: f64 = 1e-3;
pub const RESIDUE_REL_TOL: f64 = 1e-2;

/// Everything a run depends on. Two runs with equal configs and inputs give identical reports.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub r_max: Option<u32>,
    pub mu_cap: Option<u32>,
    pub tol: Option<f64>,
    pub profile: Option<CutoffProfile>,
    pub order: Option<MonomialOrder>,
    pub budget: Budget,
    pub verbose: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            input: None,
            output: None,
            seed: DEFAULT_SEED,
            r_max: None,
            mu_cap: None,
            tol: None,
            profile: None,
            order: None,
            budget: Budget::default(),
            verbose: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub report: String,
}

/// Reads `config.input` (required except for `residue-demo`) and runs the command.
pub fn run(config: &RunConfig) -> Outcome {
    let text = match &config.input {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                let mut r = Report::new(config, Some(path));
                let _ = writeln!(r.body, "error: cannot read {}: {e}", path.display());
                return r.finish(EXIT_INPUT);
            }
        },
        None if config.command == Command::ResidueDemo => String::new(),
        None => {
            let mut r = Report::new(config, None);
            let _ = writeln!(r.body, "error: `{}` needs --input", config.command);
            return r.finish(EXIT_INPUT);
        }
    };
    run_with_name(config, &text, config.input.as_deref())
}

/// Runs the command on in-memory input.
pub fn run_text(config: &RunConfig, text: &str) -> Outcome {
    run_with_name(config, text, None)
}

fn run_with_name(config: &RunConfig, text: &str, path: Option<&Path>) -> Outcome {
    let mut report = Report::new(config, path);
    let doc = if config.command == Command::ResidueDemo && text.trim().is_empty() {
        Ok(InputDoc::Residue(ResidueFile::default()))
    } else {
        parse_input(text)
    };
    let code = match doc {
        Err(e) => report.input_error(&e),
        Ok(doc) => match dispatch(config, &doc, &mut report) {
            Ok(code) => code,
            Err(Failure::Input(e)) => report.input_error(&e),
            Err(Failure::Budget(msg)) => {
                let _ = writeln!(report.body, "error: budget exhausted: {msg}");
                EXIT_BUDGET
            }
        },
    };
    report.finish(code)
}

enum Failure {
    Input(InputError),
    Budget(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

impl From<GbError> for Failure {
    fn from(e: GbError) -> Self {
        match e {
            GbError::BudgetExhausted(m) => Failure::Budget(m),
            other => Failure::Input(InputError::new(1, 1, other.to_string())),
        }
    }
}

impl From<ResidueError> for Failure {
    fn from(e: ResidueError) -> Self {
        match e {
            ResidueError::NoConvergence { .. } => Failure::Budget(format!("quadrature: {e}")),
            other => Failure::Input(InputError::new(1, 1, other.to_string())),
        }
    }
}

struct Report {
    body: String,
}

impl Report {
    fn new(config: &RunConfig, path: Option<&Path>) -> Self {
        let mut body = String::new();
        let _ = writeln!(body, "# arlab {}", config.command);
        let name = path
            .and_then(|p| p.file_name())
            .map_or_else(|| "-".to_string(), |n| n.to_string_lossy().into_owned());
        let _ = writeln!(body, "# input = {name}");
        let _ = writeln!(body, "# seed = {}", config.seed);
        let b = config.budget;
        let _ = writeln!(
            body,
            "# budget = max_degree {}, max_basis {}, max_pairs {}",
            b.max_degree, b.max_basis, b.max_pairs
        );
        body.push_str(
            "# note: mu is computed in the polynomial ring; it is an upper bound for the local mu at the origin\n",
        );
        body.push_str(
            "# note: residue actions pair T with phi dz; dzb^dz = 2i dm; <dbar[1/z], phi dz> = 2 pi i phi(0)\n",
        );
        Report { body }
    }

    fn input_error(&mut self, e: &InputError) -> i32 {
        let _ = writeln!(self.body, "error: input: {e}");
        EXIT_INPUT
    }

    fn finish(mut self, code: i32) -> Outcome {
        let status = match code {
            EXIT_OK => "ok",
            EXIT_CHECK_FAILED => "check failed",
            EXIT_BUDGET => "budget exhausted",
            _ => "input error",
        };
        let _ = writeln!(self.body, "status = {status} (exit {code})");
        Outcome {
            exit_code: code,
            report: self.body,
        }
    }
}

fn dispatch(config: &RunConfig, doc: &InputDoc, out: &mut Report) -> Result<i32, Failure> {
    let wrong = |expected: &str| Failure::Input(InputError::new(1, 1, format!("`{}` expects {expected}", config.command)));
    match (config.command, doc) {
        (Command::Groebner, InputDoc::Instances(f)) => groebner_report(config, f, out),
        (Command::Koszul, InputDoc::Instances(f)) => koszul_report(f, out),
        (Command::Diamond, InputDoc::Complexes(cs)) => diamond_report(config, cs.clone(), out),
        (Command::Diamond, InputDoc::Instances(f)) => diamond_report(config, koszul_factors(f)?, out),
        (Command::ArCheck, InputDoc::Instances(f)) => ar_check_report(config, f, out),
        (Command::ArSweep, InputDoc::Instances(f)) => ar_sweep_report(config, f, out),
        (Command::PointCheck, InputDoc::Instances(f)) => point_check_instances(config, f, out),
        (Command::PointCheck, InputDoc::Complexes(cs)) => point_check_complexes(config, cs, out),
        (Command::ResidueDemo, InputDoc::Residue(r)) => residue_report(config, r, out),
        (Command::Diamond | Command::PointCheck, _) => Err(wrong("an instance file or a complexes file")),
        (Command::ResidueDemo, _) => Err(wrong("a residue file")),
        _ => Err(wrong("an instance file")),
    }
}

fn engine(config: &RunConfig, f: &InstanceFile) -> Engine {
    Engine::new(config.order.unwrap_or(*f.ring.order())).with_budget(config.budget)
}

fn ideal_spec(f: &InstanceFile, i: usize) -> Result<SubmoduleSpec, Failure> {
    Ok(SubmoduleSpec::ideal(&f.ring, f.ideals[i].1.clone())?)
}

fn groebner_report(config: &RunConfig, f: &InstanceFile, out: &mut Report) -> Result<i32, Failure> {
    let e = engine(config, f);
    let _ = writeln!(out.body, "order = {}", e.order.name());
    let mut specs: Vec<(String, SubmoduleSpec)> = Vec::new();
    for i in 0..f.ideals.len() {
        specs.push((format!("ideal {}", f.ideal_name(i)), ideal_spec(f, i)?));
    }
    if let Some(m) = f.module_spec() {
        specs.push(("module".to_string(), m));
    }
    if specs.is_empty() {
        return Err(InputError::new(1, 1, "nothing to compute: no `ideal` or `module` block").into());
    }
    let mut code = EXIT_OK;
    for (name, spec) in &specs {
        let gb = e.basis(spec)?;
        let _ = writeln!(out.body, "\n[{name}] reduced basis, {} elements", gb.len());
        for g in gb.elements() {
            if spec.rank() == 1 {
                let _ = writeln!(out.body, "  {}", g.component(0));
            } else {
                let _ = writeln!(out.body, "  {g}");
            }
        }
        let spairs = gb.s_pairs_reduce_to_zero();
        let reduced = gb.is_reduced();
        let _ = writeln!(out.body, "  s-pairs reduce to zero: {}", yes_no(spairs));
        let _ = writeln!(out.body, "  reduced: {}", yes_no(reduced));
        if !(spairs && reduced) {
            let _ = writeln!(out.body, "witness check=groebner-basis target=\"{name}\"");
            code = EXIT_CHECK_FAILED;
        }
        if name == "module" {
            let res = e.free_resolution(spec, f.ring.nvars() + 1)?;
            let ranks: Vec<String> = res.complex.ranks().iter().map(usize::to_string).collect();
            let _ = writeln!(
                out.body,
                "  free resolution ranks: {}{}",
                ranks.join(" "),
                if res.truncated { " (truncated)" } else { "" }
            );
        }
    }
    Ok(code)
}

fn koszul_factors(f: &InstanceFile) -> Result<Vec<GradedFreeComplex>, Failure> {
    if f.ideals.is_empty() {
        return Err(InputError::new(1, 1, "no `ideal` block").into());
    }
    f.ideals
        .iter()
        .map(|(_, gens)| koszul_complex(&f.ring, gens).map_err(|e| InputError::new(1, 1, e.to_string()).into()))
        .collect()
}

fn koszul_report(f: &InstanceFile, out: &mut Report) -> Result<i32, Failure> {
    let factors = koszul_factors(f)?;
    let mut code = EXIT_OK;
    for (i, k) in factors.iter().enumerate() {
        let _ = writeln!(out.body, "\n# Koszul complex of ideal {}", f.ideal_name(i));
        out.body.push_str(&emit_complex(k));
        code = code.max(verify_line(out, &format!("K({})", f.ideal_name(i)), k));
    }
    Ok(code)
}

fn verify_line(out: &mut Report, name: &str, c: &GradedFreeComplex) -> i32 {
    match c.verify() {
        Ok(()) => {
            let _ = writeln!(out.body, "# {name}: f o f = 0 at every level");
            EXIT_OK
        }
        Err(d) => {
            let _ = writeln!(
                out.body,
                "witness check=complex target=\"{name}\" level={} row={} col={} entry=\"{}\"",
                d.level, d.row, d.col, d.entry
            );
            EXIT_CHECK_FAILED
        }
    }
}

fn diamond_report(config: &RunConfig, factors: Vec<GradedFreeComplex>, out: &mut Report) -> Result<i32, Failure> {
    let _ = writeln!(out.body, "factors = {}", factors.len());
    let mut code = EXIT_OK;
    for (s, c) in factors.iter().enumerate() {
        let ranks: Vec<String> = c.ranks().iter().map(usize::to_string).collect();
        let _ = writeln!(out.body, "factor {} ranks: {}", s + 1, ranks.join(" "));
        code = code.max(verify_line(out, &format!("factor {}", s + 1), c));
    }
    let d = diamond_product(&factors).map_err(|e| InputError::new(1, 1, e.to_string()))?;
    let h = d.complex();
    let ranks: Vec<String> = h.ranks().iter().map(usize::to_string).collect();
    let _ = writeln!(out.body, "H ranks: {}", ranks.join(" "));
    let mut rank_ok = true;
    for k in 0..h.ranks().len() {
        if h.rank(k) != d.expected_rank(k) {
            rank_ok = false;
            let _ = writeln!(
                out.body,
                "witness check=rank-identity level={k} rank={} expected={}",
                h.rank(k),
                d.expected_rank(k)
            );
        }
    }
    let _ = writeln!(out.body, "rank identity: {}", yes_no(rank_ok));
    if !rank_ok {
        code = EXIT_CHECK_FAILED;
    }
    code = code.max(verify_line(out, "H", h));
    if config.verbose {
        for k in 1..h.ranks().len() {
            for b in d.blocks(k) {
                let lv: Vec<String> = b.levels.iter().map(usize::to_string).collect();
                let _ = writeln!(out.body, "block H_{k} levels=({}) offset={} size={}", lv.join(","), b.offset, b.size);
            }
        }
        out.body.push_str(&emit_complex(h));
    }
    // image(h_1) against the product of the images of the f^s_1
    if factors.iter().all(|c| c.rank(0) == 1 && c.length() >= 1) {
        let ring = h.ring();
        let e = Engine::new(config.order.unwrap_or(*ring.order())).with_budget(config.budget);
        let mut product: Vec<Polynomial> = vec![ring.one()];
        for c in d.factors() {
            let gens: Vec<Polynomial> = c.map(1).columns().iter().map(|v| v.component(0).clone()).collect();
            product = product
                .iter()
                .flat_map(|p| gens.iter().map(move |g| p * g))
                .filter(|p| !p.is_zero())
                .collect();
        }
        let image = SubmoduleSpec::new(ring, 1, h.map(1).columns())?;
        let expected = SubmoduleSpec::ideal(ring, product)?;
        let same = e.same_submodule(&image, &expected)?;
        let _ = writeln!(out.body, "image(h_1) = product of the images of f_1: {}", yes_no(same));
        if !same {
            let _ = writeln!(out.body, "witness check=image target=\"h_1\"");
            code = EXIT_CHECK_FAILED;
        }
    }
    Ok(code)
}

fn instances(config: &RunConfig, f: &InstanceFile) -> Result<Vec<ArtinReesInstance>, Failure> {
    Ok(f.instances(config.r_max.unwrap_or(f.r_max), config.mu_cap.unwrap_or(f.mu_cap))?)
}

fn witness_line(name: &str, w: &Witness) -> String {
    format!(
        "witness check=artin-rees instance={name} mu={} r={} element={} normal_form={}",
        w.mu, w.r, w.element, w.normal_form
    )
}

fn ar_check_report(config: &RunConfig, f: &InstanceFile, out: &mut Report) -> Result<i32, Failure> {
    let mu = f
        .mu
        .ok_or_else(|| InputError::new(1, 1, "`ar-check` needs a `mu = <n>` line"))?;
    let e = engine(config, f);
    let insts = instances(config, f)?;
    let _ = writeln!(out.body, "mu = {mu}");
    let _ = writeln!(out.body, "checking I^(mu+r) M cap N inside I^r N for r = 0..=r_max");
    let mut code = EXIT_OK;
    for inst in &insts {
        let mut failed = Vec::new();
        for r in 0..=inst.r_max {
            if let Some(w) = containment_check(&e, inst, mu, r)? {
                failed.push(w);
            }
        }
        let _ = writeln!(
            out.body,
            "{}: r_max={} {}",
            inst.name,
            inst.r_max,
            if failed.is_empty() { "holds" } else { "fails" }
        );
        for w in &failed {
            let _ = writeln!(out.body, "{}", witness_line(&inst.name, w));
        }
        if !failed.is_empty() {
            code = EXIT_CHECK_FAILED;
        }
    }
    Ok(code)
}

fn ar_sweep_report(config: &RunConfig, f: &InstanceFile, out: &mut Report) -> Result<i32, Failure> {
    let e = engine(config, f);
    let insts = instances(config, f)?;
    let rep = uniform_sweep(&e, &insts)?;
    let _ = writeln!(out.body, "instances = {}", insts.len());
    let _ = writeln!(out.body, "{:<12} {:>4} {:<24} rejected", "instance", "mu", "mu(r), r=0..r_max");
    for row in &rep.rows {
        let mu = match (row.mu, row.capped, &row.budget_error) {
            (Some(m), _, _) => m.to_string(),
            (None, true, _) => "cap".to_string(),
            _ => "-".to_string(),
        };
        let per: Vec<String> = row.per_r.iter().map(u32::to_string).collect();
        let _ = writeln!(
            out.body,
            "{:<12} {:>4} {:<24} {}",
            row.instance,
            mu,
            format!("({})", per.join(",")),
            row.witnesses.len()
        );
        if config.verbose {
            for w in &row.witnesses {
                let _ = writeln!(out.body, "  rejected mu={} r={} element={}", w.mu, w.r, w.element);
            }
        }
        if let Some(msg) = &row.budget_error {
            let _ = writeln!(out.body, "  budget exhausted: {msg}");
        }
    }
    let _ = writeln!(
        out.body,
        "family max mu = {}",
        rep.family_max.map_or_else(|| "-".to_string(), |m| m.to_string())
    );
    let _ = writeln!(out.body, "stabilized = {}", yes_no(rep.stabilized));
    if rep.any_capped() || rep.any_budget_error() {
        let _ = writeln!(out.body, "incomplete: raise --mu-cap or the budget");
        return Ok(EXIT_BUDGET);
    }
    Ok(EXIT_OK)
}

fn fmt_point(p: &[Complex64]) -> String {
    let parts: Vec<String> = p.iter().map(|z| format!("{:+.6}{:+.6}i", z.re, z.im)).collect();
    format!("({})", parts.join(", "))
}


struct PointRow {
    point: Vec<Complex64>,
    single: Vec<f64>,
    truncation: Vec<f64>,
    product: Option<f64>,
    error: Option<String>,
}

fn point_check_instances(config: &RunConfig, f: &InstanceFile, out: &mut Report) -> Result<i32, Failure> {
    let factors = koszul_factors(f)?;
    let n = f.ring.nvars();
    let gens: Vec<&Vec<Polynomial>> = f.ideals.iter().map(|(_, g)| g).collect();
    let count = f.points.unwrap_or(DEFAULT_POINTS);
    let points = sample_points(n, count, config.seed, |p| {
        gens.iter()
            .all(|g| g.iter().map(|q| q.eval_complex(p).norm_sqr()).sum::<f64>().sqrt() >= MIN_GENERATOR_NORM)
    });
    if points.len() < count {
        return Err(InputError::new(1, 1, "could not sample points away from the zero sets").into());
    }
    let padded = pad_to_odd(factors.clone());
    let with_product = factors.len() >= 2;
    let diamond = if with_product {
        Some(diamond_product(&padded).map_err(|e| InputError::new(1, 1, e.to_string()))?)
    } else {
        None
    };
    let rows: Vec<PointRow> = points
        .into_par_iter()
        .map(|p| {
            let mut row = PointRow {
                point: p.clone(),
                single: Vec::new(),
                truncation: Vec::new(),
                product: None,
                error: None,
            };
            let mut frames = Vec::new();
            for g in &gens {
                match PointFrame::koszul(&f.ring, g, &p) {
                    Ok(fr) => {
                        row.single.push(fr.nabla_residual());
                        row.truncation.push(koszul_truncation_defect(&fr, g.len(), n));
                        frames.push(fr);
                    }
                    Err(e) => {
                        row.error = Some(e.to_string());
                        return row;
                    }
                }
            }
            if let Some(d) = &diamond {
                for c in &padded[factors.len()..] {
                    match PointFrame::general(c, &p) {
                        Ok(fr) => frames.push(fr),
                        Err(e) => {
                            row.error = Some(e.to_string());
                            return row;
                        }
                    }
                }
                match check_product_identity(d, &frames, &p) {
                    Ok(c) => row.product = Some(c.max()),
                    Err(e) => row.error = Some(e.to_string()),
                }
            }
            row
        })
        .collect();
    let names: Vec<String> = (0..f.ideals.len()).map(|i| f.ideal_name(i)).collect();
    Ok(tabulate_points(config, out, &names, rows, with_product, true))
}

fn point_check_complexes(config: &RunConfig, cs: &[GradedFreeComplex], out: &mut Report) -> Result<i32, Failure> {
    let n = cs[0].ring().nvars();
    for c in cs {
        if c.ring().vars() != cs[0].ring().vars() {
            return Err(InputError::new(1, 1, "all complexes must use the same variables").into());
        }
    }
    let count = DEFAULT_POINTS;
    // sample until every complex is pointwise exact at the point
    let points = sample_points(n, count, config.seed, |p| cs.iter().all(|c| PointFrame::general(c, p).is_ok()));
    if points.len() < count {
        return Err(InputError::new(1, 1, "the complexes are not generically exact").into());
    }
    let padded = pad_to_odd(cs.to_vec());
    let with_product = cs.len() >= 2;
    let diamond = if with_product {
        Some(diamond_product(&padded).map_err(|e| InputError::new(1, 1, e.to_string()))?)
    } else {
        None
    };
    let rows: Vec<PointRow> = points
        .into_par_iter()
        .map(|p| {
            let mut row = PointRow {
                point: p.clone(),
                single: Vec::new(),
                truncation: Vec::new(),
                product: None,
                error: None,
            };
            let mut frames = Vec::new();
            for c in &padded {
                match PointFrame::general(c, &p) {
                    Ok(fr) => frames.push(fr),
                    Err(e) => {
                        row.error = Some(e.to_string());
                        return row;
                    }
                }
            }
            row.single = frames[..cs.len()].iter().map(PointFrame::nabla_residual).collect();
            if let Some(d) = &diamond {
                match check_product_identity(d, &frames, &p) {
                    Ok(c) => row.product = Some(c.max()),
                    Err(e) => row.error = Some(e.to_string()),
                }
            }
            row
        })
        .collect();
    let names: Vec<String> = (1..=cs.len()).map(|i| format!("E{i}")).collect();
    Ok(tabulate_points(config, out, &names, rows, with_product, false))
}

// negated comparisons so that NaN residuals fail
#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn tabulate_points(
    config: &RunConfig,
    out: &mut Report,
    names: &[String],
    rows: Vec<PointRow>,
    with_product: bool,
    koszul: bool,
) -> i32 {
    // finite-difference derivatives are only accurate to about 1e-8
    let single_tol = config.tol.unwrap_or(if koszul { SINGLE_TOL } else { FD_SINGLE_TOL });
    let product_tol = config.tol.unwrap_or(PRODUCT_TOL);
    let _ = writeln!(out.body, "points = {}", rows.len());
    let _ = writeln!(out.body, "tolerance single = {single_tol:.1e}");
    if with_product {
        let _ = writeln!(out.body, "tolerance product = {product_tol:.1e} (factors padded to an odd count)");
    }
    if koszul {
        let _ = writeln!(out.body, "tolerance truncation = {TRUNCATION_TOL:.1e}");
    }
    let mut failed = false;
    let mut worst_single: f64 = 0.0;
    let mut worst_product: f64 = 0.0;
    let mut worst_trunc: f64 = 0.0;
    for (i, row) in rows.iter().enumerate() {
        let mut line = format!("point {:>3} z={}", i + 1, fmt_point(&row.point));
        let mut bad = Vec::new();
        if let Some(e) = &row.error {
            line.push_str(&format!(" error=\"{e}\""));
            bad.push("degenerate".to_string());
        }
        for (name, v) in names.iter().zip(&row.single) {
            line.push_str(&format!(" single[{name}]={v:.2e}"));
            worst_single = worst_single.max(*v);
            if !(*v < single_tol) {
                bad.push(format!("single[{name}]"));
            }
        }
        for (name, v) in names.iter().zip(&row.truncation) {
            line.push_str(&format!(" trunc[{name}]={v:.2e}"));
            worst_trunc = worst_trunc.max(*v);
            if !(*v < TRUNCATION_TOL) {
                bad.push(format!("trunc[{name}]"));
            }
        }
        if let Some(v) = row.product {
            line.push_str(&format!(" product={v:.2e}"));
            worst_product = worst_product.max(v);
            if !(v < product_tol) {
                bad.push("product".to_string());
            }
        }
        line.push_str(if bad.is_empty() { " pass" } else { " FAIL" });
        let _ = writeln!(out.body, "{line}");
        if !bad.is_empty() {
            failed = true;
            let _ = writeln!(
                out.body,
                "witness check=point-identity point={} z={} failed={}",
                i + 1,
                fmt_point(&row.point),
                bad.join(",")
            );
        }
    }
    let _ = writeln!(out.body, "max single residual = {worst_single:.2e}");
    if koszul {
        let _ = writeln!(out.body, "max truncation defect = {worst_trunc:.2e}");
    }
    if with_product {
        let _ = writeln!(out.body, "max product residual = {worst_product:.2e}");
    }
    if failed {
        EXIT_CHECK_FAILED
    } else {
        EXIT_OK
    }
}

fn fmt_c(z: Complex64) -> String {
    format!("{:+.10e}{:+.10e}i", z.re, z.im)
}

fn rel_diff(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

fn residue_report(config: &RunConfig, r: &ResidueFile, out: &mut Report) -> Result<i32, Failure> {
    let phi = r.test_form();
    let chi = config.profile.unwrap_or(r.profile);
    let sched = &r.schedule;
    let tol = config.tol.unwrap_or(RESIDUE_REL_TOL);
    let k = r.k;
    let _ = writeln!(out.body, "phi = ({}) * bump(|z|/{})", r.phi, r.radius);
    let _ = writeln!(out.body, "k = {k}");
    let _ = writeln!(out.body, "profile = {}", chi.name());
    let _ = writeln!(out.body, "schedule = {}", sched.describe());
    let _ = writeln!(out.body, "tolerance = {tol:.1e}, asymmetry ratio = {ASYMMETRY_RATIO:.1e}");
    let line = |out: &mut Report, name: &str, e: &Estimate| {
        let _ = writeln!(out.body, "{name:<34} = {} (err {:.2e})", fmt_c(e.value), e.error);
    };

    let res_k = residue_action(k, &phi, chi, sched)?;
    line(out, &format!("<dbar[1/z^{k}], phi dz>"), &res_k);
    if k <= 2 {
        let reference = if k == 1 { phi.value_at_zero() } else { phi.dz_at_zero() } * Complex64::new(0.0, 2.0 * std::f64::consts::PI);
        let _ = writeln!(out.body, "{:<34} = {}", "closed form", fmt_c(reference));
    }
    let rp = ordered_product_action(ProductOrder::ResidueThenPv, k, 1, &phi, chi, sched)?;
    let pr = ordered_product_action(ProductOrder::PvThenResidue, k, 1, &phi, chi, sched)?;
    let res_next = residue_action(k + 1, &phi, chi, sched)?;
    line(out, &format!("<dbar(1/z^{k}) ^ (1/z), phi dz>"), &rp);
    line(out, &format!("<(1/z) ^ dbar(1/z^{k}), phi dz>"), &pr);
    line(out, &format!("<dbar[1/z^{}], phi dz>", k + 1), &res_next);

    let mut code = EXIT_OK;
    let mut check = |out: &mut Report, name: &str, ok: bool, detail: String| {
        let _ = writeln!(out.body, "check {name}: {} ({detail})", if ok { "pass" } else { "FAIL" });
        if !ok {
            let _ = writeln!(out.body, "witness check={name} {detail}");
            code = EXIT_CHECK_FAILED;
        }
    };
    if res_next.value.norm() < 1e-12 {
        check(
            out,
            "nondegenerate",
            false,
            format!("value={} reason=\"phi has no z^{k} term at the origin\"", fmt_c(res_next.value)),
        );
        return Ok(code);
    }
    let ratio = pr.value.norm() / rp.value.norm();
    check(out, "asymmetry", ratio < ASYMMETRY_RATIO, format!("ratio={ratio:.2e}"));
    let dec = rel_diff(rp.value, res_next.value);
    check(out, "decomposition", dec <= tol, format!("relative_difference={dec:.2e}"));
    let mut dev: f64 = 0.0;
    for other in CutoffProfile::ALL {
        if other == chi {
            continue;
        }
        let v = ordered_product_action(ProductOrder::ResidueThenPv, k, 1, &phi, other, sched)?;
        let w = residue_action(k + 1, &phi, other, sched)?;
        line(out, &format!("[{}] residue-then-pv", other.name()), &v);
        line(out, &format!("[{}] dbar[1/z^{}]", other.name(), k + 1), &w);
        dev = dev.max(rel_diff(v.value, rp.value)).max(rel_diff(w.value, res_next.value));
    }
    check(out, "profiles", dev <= tol, format!("max_relative_deviation={dev:.2e}"));
    Ok(code)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FAMILY: &str = "vars = x\nbegin module\nx^2\nend\nbegin ideal\nx\nend\nbegin ideal\nx^2\nend\n";

    #[test]
    fn sweep_report_and_exit_codes() {
        let cfg = RunConfig::new(Command::ArSweep);
        let out = run_text(&cfg, FAMILY);
        assert_eq!(out.exit_code, 0, "{}", out.report);
        assert!(out.report.contains("family max mu = 2"));
        assert_eq!(run_text(&cfg, FAMILY), out);

        let mut check = RunConfig::new(Command::ArCheck);
        check.r_max = Some(2);
        let out = run_text(&check, &format!("mu = 1\n{FAMILY}"));
        assert_eq!(out.exit_code, 1);
        assert!(out.report.contains("witness check=artin-rees instance=I1 mu=1"));

        let out = run_text(&cfg, "vars = x\nbegin ideal\nx +* 1\nend\n");
        assert_eq!(out.exit_code, 3);
        assert!(out.report.contains("line 3, column"), "{}", out.report);
    }

    #[test]
    fn capped_sweep_exits_two() {
        let mut cfg = RunConfig::new(Command::ArSweep);
        cfg.mu_cap = Some(1);
        assert_eq!(run_text(&cfg, FAMILY).exit_code, 2);
    }

    #[test]
    fn command_names_round_trip() {
        for c in Command::ALL {
            assert_eq!(c.name().parse::<Command>().unwrap(), c);
        }
    }
}
