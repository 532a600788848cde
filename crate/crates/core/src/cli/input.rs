use std::fmt::Write as _;

use num_complex::Complex64;

use crate::artin_rees::ArtinReesInstance;
use crate::complexes::{emit_complex, ComplexError, GradedFreeComplex};
use crate::groebner::SubmoduleSpec;
use crate::poly::{coeff_to_f64, FreeModuleElement, MonomialOrder, PolyError, Polynomial, Ring, RingRef};
use crate::residue::{CutoffProfile, EpsilonSchedule, TestForm};

use super::format::{parse_document, Block, BlockLine, Document, InputError};

/// Ring, ideals and an optional submodule, plus search parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceFile {
    pub ring: RingRef,
    pub rank: usize,
    pub r_max: u32,
    pub mu_cap: u32,
    pub mu: Option<u32>,
    pub points: Option<usize>,
    pub module: Option<Vec<FreeModuleElement>>,
    pub ideals: Vec<(Option<String>, Vec<Polynomial>)>,
}

pub const DEFAULT_R_MAX: u32 = 4;
pub const DEFAULT_MU_CAP: u32 = 8;

fn poly_error(line: &BlockLine, e: PolyError) -> InputError {
    match e {
        PolyError::Parse { column, message } => InputError::new(line.line, line.column + column - 1, message),
        other => InputError::new(line.line, line.column, other.to_string()),
    }
}

fn parse_u32(s: &str) -> Option<u32> {
    s.parse().ok()
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, InputError> {
        let doc = parse_document(text)?;
        doc.restrict(
            &["vars", "order", "rank", "r_max", "mu_cap", "mu", "points"],
            &["ideal", "module"],
        )?;
        let vars_key = doc
            .key("vars")
            .ok_or_else(|| InputError::new(1, 1, "missing `vars`"))?;
        let vars: Vec<&str> = vars_key.value.split_whitespace().collect();
        if vars.is_empty() {
            return Err(InputError::new(vars_key.line, vars_key.value_column, "no variables given"));
        }
        for (i, v) in vars.iter().enumerate() {
            let ok = v.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_alphanumeric() || c == '_');
            if !ok || vars[..i].contains(v) {
                return Err(InputError::new(vars_key.line, vars_key.value_column, format!("bad variable `{v}`")));
            }
        }
        let order = match doc.key("order") {
            None => MonomialOrder::default(),
            Some(k) => MonomialOrder::parse(&k.value).map_err(|m| InputError::new(k.line, k.value_column, m))?,
        };
        let ring = Ring::new(&vars, order);
        let rank = doc.parsed("rank", 1usize, |s| s.parse().ok().filter(|&r: &usize| r > 0))?;
        let r_max = doc.parsed("r_max", DEFAULT_R_MAX, parse_u32)?;
        let mu_cap = doc.parsed("mu_cap", DEFAULT_MU_CAP, |s| parse_u32(s).filter(|&c| c > 0))?;
        let mu = doc.parsed("mu", None, |s| parse_u32(s).map(Some))?;
        let points = doc.parsed("points", None, |s| s.parse().ok().filter(|&p: &usize| p > 0).map(Some))?;

        let mut module = None;
        let mut ideals = Vec::new();
        for b in doc.blocks() {
            match b.name.as_str() {
                "module" => {
                    if module.is_some() {
                        return Err(InputError::new(b.line, 1, "more than one `module` block"));
                    }
                    if b.label.is_some() {
                        return Err(InputError::new(b.line, 1, "`module` blocks take no label"));
                    }
                    module = Some(parse_module_block(&ring, b, rank)?);
                }
                _ => {
                    let gens = b
                        .body
                        .iter()
                        .map(|l| ring.parse(&l.text).map_err(|e| poly_error(l, e)))
                        .collect::<Result<Vec<_>, _>>()?;
                    if gens.is_empty() {
                        return Err(InputError::new(b.line, 1, "empty `ideal` block"));
                    }
                    if let Some(label) = &b.label {
                        if ideals.iter().any(|(l, _): &(Option<String>, Vec<Polynomial>)| l.as_ref() == Some(label)) {
                            return Err(InputError::new(b.line, 1, format!("duplicate ideal label `{label}`")));
                        }
                    }
                    ideals.push((b.label.clone(), gens));
                }
            }
        }
        Ok(InstanceFile {
            ring,
            rank,
            r_max,
            mu_cap,
            mu,
            points,
            module,
            ideals,
        })
    }

    pub fn emit(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "vars = {}", self.ring.vars().join(" "));
        let _ = writeln!(s, "order = {}", self.ring.order().name());
        let _ = writeln!(s, "rank = {}", self.rank);
        let _ = writeln!(s, "r_max = {}", self.r_max);
        let _ = writeln!(s, "mu_cap = {}", self.mu_cap);
        if let Some(mu) = self.mu {
            let _ = writeln!(s, "mu = {mu}");
        }
        if let Some(p) = self.points {
            let _ = writeln!(s, "points = {p}");
        }
        if let Some(m) = &self.module {
            s.push_str("begin module\n");
            for v in m {
                let _ = writeln!(s, "{v}");
            }
            s.push_str("end\n");
        }
        for (label, gens) in &self.ideals {
            match label {
                Some(l) => {
                    let _ = writeln!(s, "begin ideal {l}");
                }
                None => s.push_str("begin ideal\n"),
            }
            for g in gens {
                let _ = writeln!(s, "{g}");
            }
            s.push_str("end\n");
        }
        s
    }

    /// Name of the `i`-th ideal: its label, or `I<i+1>`.
    pub fn ideal_name(&self, i: usize) -> String {
        self.ideals[i].0.clone().unwrap_or_else(|| format!("I{}", i + 1))
    }

    pub fn module_spec(&self) -> Option<SubmoduleSpec> {
        self.module
            .as_ref()
            .map(|m| SubmoduleSpec::new(&self.ring, self.rank, m.clone()).expect("ranks checked while parsing"))
    }

    /// One Artin–Rees instance per ideal block, all sharing the module.
    pub fn instances(&self, r_max: u32, mu_cap: u32) -> Result<Vec<ArtinReesInstance>, InputError> {
        let module = self
            .module_spec()
            .ok_or_else(|| InputError::new(1, 1, "missing `module` block"))?;
        if self.ideals.is_empty() {
            return Err(InputError::new(1, 1, "missing `ideal` block"));
        }
        self.ideals
            .iter()
            .enumerate()
            .map(|(i, (_, gens))| {
                let ideal = SubmoduleSpec::ideal(&self.ring, gens.clone()).expect("same ring");
                ArtinReesInstance::new(self.ideal_name(i), ideal, module.clone(), r_max, mu_cap)
                    .map_err(|e| InputError::new(1, 1, e.to_string()))
            })
            .collect()
    }
}

fn parse_module_block(ring: &RingRef, b: &Block, rank: usize) -> Result<Vec<FreeModuleElement>, InputError> {
    let mut out = Vec::new();
    for (i, l) in b.body.iter().enumerate() {
        let v = FreeModuleElement::parse(ring, &l.text).map_err(|e| poly_error(l, e))?;
        if v.rank() != rank {
            return Err(InputError::new(
                l.line,
                l.column,
                format!("generator {} of `module` has length {}, expected rank {}", i + 1, v.rank(), rank),
            ));
        }
        out.push(v);
    }
    if out.is_empty() {
        return Err(InputError::new(b.line, 1, "empty `module` block"));
    }
    Ok(out)
}

/// Settings of a residue experiment; `phi` is a polynomial in `z` and `zb` (standing for z̄)
/// multiplied by the bump of radius `radius`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidueFile {
    pub radius: f64,
    pub phi: Polynomial,
    pub k: u32,
    pub profile: CutoffProfile,
    pub schedule: EpsilonSchedule,
}

impl Default for ResidueFile {
    fn default() -> Self {
        let ring = residue_ring();
        ResidueFile {
            radius: 1.0,
            phi: ring.parse("1 + 1/2*z + 1/4*zb + 1/3*z*zb").expect("default form parses"),
            k: 1,
            profile: CutoffProfile::Smoothstep,
            schedule: EpsilonSchedule::default(),
        }
    }
}

fn residue_ring() -> RingRef {
    Ring::new(&["z", "zb"], MonomialOrder::default())
}

impl ResidueFile {
    pub fn parse(text: &str) -> Result<Self, InputError> {
        let doc = parse_document(text)?;
        doc.restrict(&["radius", "phi", "k", "profile", "schedule"], &[])?;
        let mut out = ResidueFile {
            radius: doc.parsed("radius", 1.0, |s| s.parse::<f64>().ok().filter(|r| *r > 0.0 && r.is_finite()))?,
            ..ResidueFile::default()
        };
        if let Some(k) = doc.key("phi") {
            out.phi = residue_ring().parse(&k.value).map_err(|e| match e {
                PolyError::Parse { column, message } => InputError::new(k.line, k.value_column + column - 1, message),
                other => InputError::new(k.line, k.value_column, other.to_string()),
            })?;
        }
        out.k = doc.parsed("k", 1, |s| parse_u32(s).filter(|&k| k > 0))?;
        out.profile = doc.parsed("profile", CutoffProfile::Smoothstep, CutoffProfile::parse)?;
        if let Some(k) = doc.key("schedule") {
            let values = k
                .value
                .split_whitespace()
                .map(|t| t.parse::<f64>().ok())
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| InputError::new(k.line, k.value_column, "schedule entries must be numbers"))?;
            out.schedule =
                EpsilonSchedule::new(values).map_err(|e| InputError::new(k.line, k.value_column, e.to_string()))?;
        }
        Ok(out)
    }

    pub fn emit(&self) -> String {
        let sched: Vec<String> = self.schedule.values().iter().map(|v| format!("{v}")).collect();
        format!(
            "radius = {}\nphi = {}\nk = {}\nprofile = {}\nschedule = {}\n",
            self.radius,
            self.phi,
            self.k,
            self.profile.name(),
            sched.join(" ")
        )
    }

    pub fn test_form(&self) -> TestForm {
        let terms = self
            .phi
            .terms()
            .iter()
            .map(|(m, c)| {
                let e = m.exponents();
                (Complex64::new(coeff_to_f64(c), 0.0), e[0], e[1])
            })
            .collect();
        TestForm::new(self.radius, terms).expect("radius validated while parsing")
    }
}

/// Splits a file of `complex ... end` documents and parses each.
pub fn parse_complexes(text: &str) -> Result<Vec<GradedFreeComplex>, InputError> {
    let lines: Vec<&str> = text.lines().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let t = lines[i].trim();
        if t.is_empty() || t.starts_with('#') {
            i += 1;
            continue;
        }
        if t != "complex" {
            return Err(InputError::new(i + 1, 1, "expected `complex`"));
        }
        let start = i;
        while i < lines.len() && lines[i].trim() != "end" {
            i += 1;
        }
        let stop = (i + 1).min(lines.len());
        let chunk = lines[start..stop].join("\n");
        let c = crate::complexes::text::parse_complex_at(&chunk, start + 1).map_err(|e| match e {
            ComplexError::Parse { line, column, message } => InputError::new(line, column, message),
            other => InputError::new(start + 1, 1, other.to_string()),
        })?;
        out.push(c);
        i = stop;
    }
    if out.is_empty() {
        return Err(InputError::new(1, 1, "no complexes in input"));
    }
    Ok(out)
}

pub fn emit_complexes(cs: &[GradedFreeComplex]) -> String {
    cs.iter().map(emit_complex).collect::<Vec<_>>().join("")
}

/// Any of the three input kinds, detected from the content.
#[derive(Clone, Debug, PartialEq)]
pub enum InputDoc {
    Instances(InstanceFile),
    Complexes(Vec<GradedFreeComplex>),
    Residue(ResidueFile),
}

pub fn parse_input(text: &str) -> Result<InputDoc, InputError> {
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty());
    match first {
        Some("complex") => parse_complexes(text).map(InputDoc::Complexes),
        _ => {
            let doc: Document = parse_document(text)?;
            if doc.key("vars").is_none() && doc.blocks().next().is_none() {
                ResidueFile::parse(text).map(InputDoc::Residue)
            } else {
                InstanceFile::parse(text).map(InputDoc::Instances)
            }
        }
    }
}

pub fn emit_input(doc: &InputDoc) -> String {
    match doc {
        InputDoc::Instances(f) => f.emit(),
        InputDoc::Complexes(cs) => emit_complexes(cs),
        InputDoc::Residue(r) => r.emit(),
    }
}
