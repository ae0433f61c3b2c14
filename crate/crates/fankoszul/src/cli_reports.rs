//! Command-line front end: configuration, dispatch, reports and golden files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::fan_core::{load_fan, DualFanMap, FaceId, Fan};
use crate::graded_linalg::default_cutoff;
use crate::graded_linalg::poly::grade_dim;
use crate::homotopy_cat::{
    heart_normal_form, homotopy_ambiguity, homotopy_hom, in_ge1, in_le0, kb_hom, minimize, perverse_cohomology, pure_replacement,
    random_complex, truncate, Complex, LfComplex,
};
use crate::koszul_dual::{
    cellular_complex, check_perversity, check_purity, co_hom, cohomology_table, constant_diagram, injective, kappa, realized_cohomology,
    stalk_complex,
};
use crate::pure_ic::{ic_table, PureCtx};
use crate::ring_side::{end_ring_r, end_ring_rvee, koszul_checks};
use crate::sheaf_quiver::{LfMap, LfSheaf};
use crate::{fixtures, Error, Result};

/// Width of the grade window used for co-module cohomology.
pub const WIDTH: i64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "fankoszul", version, about = "Intersection cohomology of fans and the combinatorial Koszul functor")]
pub struct RunConfig {
    /// Fan document (JSON), or one of the built-in names fx1, fx2, fx3.
    #[arg(long, global = true)]
    pub fan: Option<PathBuf>,
    /// Degree cutoff for section modules.
    #[arg(long, global = true, env = "FANKOSZUL_CUTOFF")]
    pub cutoff: Option<i64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Directory of archived reports to compare against.
    #[arg(long, global = true)]
    pub golden: Option<PathBuf>,
    /// Overwrite the archived report instead of comparing.
    #[arg(long, global = true, requires = "golden")]
    pub refresh_golden: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Face lattice and dual cone.
    Fan {
        #[command(subcommand)]
        what: FanCmd,
    },
    /// `ic <sigma>` for the stalks of one IC sheaf, `ic table` for all of them.
    Ic { target: String },
    /// κ of an object such as `A[0,1]`, `A{1}{2}`, `L<o>[1]` or `A[o] + L<0>`.
    Kappa { spec: String },
    Verify {
        #[command(subcommand)]
        what: VerifyCmd,
    },
    Rings {
        #[command(subcommand)]
        what: RingsCmd,
        /// Highest ring degree.
        #[arg(long, default_value_t = 4)]
        degree: i64,
    },
}

#[derive(Clone, Copy, Debug, Subcommand)]
pub enum FanCmd {
    Dual,
    Faces,
}

#[derive(Clone, Copy, Debug, Subcommand)]
pub enum VerifyCmd {
    Perversity,
    Purity,
    Cech,
    Homs,
    Truncation,
}

#[derive(Clone, Copy, Debug, Subcommand)]
pub enum RingsCmd {
    Compute,
    Check,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
}

impl Verdict {
    pub fn new(name: impl Into<String>, pass: bool) -> Verdict {
        Verdict { name: name.into(), pass }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub fan: String,
    pub cutoff: i64,
    pub inputs_digest: String,
    pub results: Value,
    pub verdicts: Vec<Verdict>,
    pub pass: bool,
    /// Left out of the JSON so that reports are byte-identical across runs.
    #[serde(skip)]
    pub elapsed: Duration,
    #[serde(skip)]
    pub text: String,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Text => {
                let mut s = format!("{} on {} (cutoff {})\n", self.command, self.fan, self.cutoff);
                s.push_str(&self.text);
                for v in &self.verdicts {
                    let _ = writeln!(s, "{} {}", if v.pass { "PASS" } else { "FAIL" }, v.name);
                }
                let _ = writeln!(s, "{} in {:.2?}", if self.pass { "PASS" } else { "FAIL" }, self.elapsed);
                s
            }
        }
    }
}

/// Section output of one command, before the common fields are attached.
pub struct Section {
    pub results: Value,
    pub verdicts: Vec<Verdict>,
    pub text: String,
}

/// Loads a fan from a path, falling back to the built-in fixtures by name.
pub fn resolve_fan(path: &Path) -> Result<(String, Fan)> {
    if path.exists() {
        let doc = std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("{}: {e}", path.display())))?;
        let name = path.file_stem().map_or("fan".into(), |s| s.to_string_lossy().into_owned());
        return Ok((name, load_fan(&doc)?));
    }
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    fixtures::all()
        .into_iter()
        .find(|(n, _)| *n == stem)
        .map(|(n, f)| (n.to_string(), f))
        .ok_or_else(|| Error::Usage(format!("no fan document at {}", path.display())))
}

/// Face from a label such as `[0,1]`, `0,1`, `[]` or `o`.
pub fn parse_face(fan: &Fan, s: &str) -> Result<FaceId> {
    match s.trim() {
        "o" | "0̸" => Ok(fan.zero_cone()),
        t => fan.parse_face(t),
    }
}

fn command_words(c: &Command) -> String {
    match c {
        Command::Fan { what } => format!("fan {}", format!("{what:?}").to_lowercase()),
        Command::Ic { target } => format!("ic {target}"),
        Command::Kappa { spec } => format!("kappa {spec}"),
        Command::Verify { what } => format!("verify {}", format!("{what:?}").to_lowercase()),
        Command::Rings { what, degree } => format!("rings {} --degree {degree}", format!("{what:?}").to_lowercase()),
    }
}

fn digest(fan: &Fan, command: &str, cutoff: i64) -> String {
    let mut h = Sha256::new();
    h.update(serde_json::to_string(&fan.document()).expect("fan document serializes"));
    h.update(command.as_bytes());
    h.update(cutoff.to_le_bytes());
    format!("{:x}", h.finalize())
}

pub fn run(config: &RunConfig) -> Result<Report> {
    let start = Instant::now();
    let path = config.fan.as_ref().ok_or_else(|| Error::Usage("--fan is required".into()))?;
    let (name, fan) = resolve_fan(path)?;
    let fan = Arc::new(fan);
    let floor = default_cutoff(fan.ambient_rank, 0);
    let cutoff = config.cutoff.unwrap_or(floor);
    if cutoff < floor {
        return Err(Error::Usage(format!("cutoff {cutoff} is below the lower bound {floor}")));
    }
    let ctx = PureCtx::with_cutoff(&fan, cutoff);
    let command = command_words(&config.command);
    let section = match &config.command {
        Command::Fan { what: FanCmd::Dual } => fan_dual(&fan)?,
        Command::Fan { what: FanCmd::Faces } => fan_faces(&fan),
        Command::Ic { target } if target == "table" => ic_table_section(&ctx)?,
        Command::Ic { target } => ic_section(&ctx, parse_face(&fan, target)?)?,
        Command::Kappa { spec } => kappa_section(&ctx, spec)?,
        Command::Verify { what } => match what {
            VerifyCmd::Perversity => verify_perversity(&ctx)?,
            VerifyCmd::Purity => verify_purity(&ctx)?,
            VerifyCmd::Cech => verify_cech(&fan)?,
            VerifyCmd::Homs => verify_homs(&ctx)?,
            VerifyCmd::Truncation => verify_truncation(&ctx, 10, 2024)?,
        },
        Command::Rings { what, degree } => rings_section(&ctx, *what, *degree)?,
    };
    let mut report = Report {
        inputs_digest: digest(&fan, &command, cutoff),
        command,
        fan: name,
        cutoff,
        results: section.results,
        pass: section.verdicts.iter().all(|v| v.pass),
        verdicts: section.verdicts,
        elapsed: Duration::ZERO,
        text: section.text,
    };
    if let Some(dir) = &config.golden {
        let ok = golden(&report, dir, config.refresh_golden)?;
        report.verdicts.push(Verdict::new("golden", ok));
        report.pass &= ok;
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// File name of the archived report for a command.
pub fn golden_path(dir: &Path, report: &Report) -> PathBuf {
    let slug: String = report.command.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
    dir.join(format!("{}__{}.json", report.fan, slug))
}

/// Compares (or rewrites) the archived report. Comparison is on parsed JSON values.
pub fn golden(report: &Report, dir: &Path, refresh: bool) -> Result<bool> {
    let path = golden_path(dir, report);
    if refresh {
        std::fs::create_dir_all(dir).map_err(|e| Error::Usage(format!("{}: {e}", dir.display())))?;
        std::fs::write(&path, report.to_json()).map_err(|e| Error::Usage(format!("{}: {e}", path.display())))?;
        return Ok(true);
    }
    let Ok(stored) = std::fs::read_to_string(&path) else { return Ok(false) };
    let stored: Value = serde_json::from_str(&stored).map_err(|e| Error::MalformedDocument(e.to_string()))?;
    Ok(stored == serde_json::to_value(report).expect("report serializes"))
}

pub fn fan_dual(fan: &Fan) -> Result<Section> {
    let d = DualFanMap::new(fan)?;
    let perp: BTreeMap<String, String> =
        (0..fan.num_faces()).map(|f| Ok((fan.label(f), d.target.label(d.perp(f)?)))).collect::<Result<_>>()?;
    let mut text = String::from("dual rays:\n");
    for r in &d.target.rays {
        let _ = writeln!(text, "  {r:?}");
    }
    for (a, b) in &perp {
        let _ = writeln!(text, "  {a:>10} ⊥ {b}");
    }
    Ok(Section { results: json!({ "rays": d.target.rays, "perp": perp }), verdicts: Vec::new(), text })
}

pub fn fan_faces(fan: &Fan) -> Section {
    let mut text = String::new();
    for f in 0..fan.num_faces() {
        let _ = writeln!(
            text,
            "  {:>10}  dim {}  facets {:?}",
            fan.label(f),
            fan.dim(f),
            fan.facets(f).iter().map(|&x| fan.label(x)).collect::<Vec<_>>()
        );
    }
    Section { results: fan.summary(), verdicts: Vec::new(), text }
}

fn ic_text(rows: &[crate::pure_ic::IcTableRow]) -> String {
    let w1 = rows.iter().map(|r| r.sigma.chars().count()).max().unwrap_or(1).max(5);
    let w2 = rows.iter().map(|r| r.tau.chars().count()).max().unwrap_or(1).max(3);
    let mut s = format!("  {:<w1$}  {:<w2$}  degrees (multiplicity)\n", "sigma", "tau");
    for r in rows {
        let cells: Vec<String> = r.degrees.iter().zip(&r.multiplicities).map(|(d, m)| format!("{d:>3} ({m})")).collect();
        let _ = writeln!(s, "  {:<w1$}  {:<w2$}  {}", r.sigma, r.tau, cells.join("  "));
    }
    s
}

pub fn ic_table_section(ctx: &PureCtx) -> Result<Section> {
    let rows = ic_table(ctx)?;
    Ok(Section { text: ic_text(&rows), results: json!({ "rows": rows }), verdicts: Vec::new() })
}

pub fn ic_section(ctx: &PureCtx, sigma: FaceId) -> Result<Section> {
    let label = ctx.fan.label(sigma);
    let rows: Vec<_> = ic_table(ctx)?.into_iter().filter(|r| r.sigma == label).collect();
    Ok(Section { text: ic_text(&rows), results: json!({ "sigma": label, "rows": rows }), verdicts: Vec::new() })
}

/// Parsed object of the `kappa` mini-language: a direct sum of shifted standard sheaves.
#[derive(Clone, Debug, PartialEq)]
pub struct ObjectSpec {
    /// `(sheaf, degree)` summands.
    pub summands: Vec<(ObjectAtom, i64, i64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ObjectAtom {
    /// `A`
    Structure,
    /// `A[τ]`
    Closed(FaceId),
    /// `A{τ}`, extension by zero from one face
    Point(FaceId),
    /// `L<σ>`
    Ic(FaceId),
}

struct SpecParser<'a> {
    s: &'a [u8],
    at: usize,
    fan: &'a Fan,
}

impl SpecParser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Usage(format!("object spec at column {}: {msg}", self.at + 1)))
    }

    fn skip_ws(&mut self) {
        while self.at < self.s.len() && self.s[self.at].is_ascii_whitespace() {
            self.at += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.at).copied()
    }

    fn eat(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.at += 1;
            Ok(())
        } else {
            self.err(&format!("expected '{}'", c as char))
        }
    }

    fn until(&mut self, close: u8) -> Result<String> {
        let start = self.at;
        while self.at < self.s.len() && self.s[self.at] != close {
            self.at += 1;
        }
        if self.at == self.s.len() {
            return self.err(&format!("missing '{}'", close as char));
        }
        let t = String::from_utf8_lossy(&self.s[start..self.at]).into_owned();
        self.at += 1;
        Ok(t)
    }

    fn face(&mut self, close: u8) -> Result<FaceId> {
        let t = self.until(close)?;
        parse_face(self.fan, &t)
    }

    fn int(&mut self, close: u8) -> Result<i64> {
        let t = self.until(close)?;
        t.trim().parse().or_else(|_| self.err(&format!("'{t}' is not an integer")))
    }

    fn expr(&mut self) -> Result<Vec<(ObjectAtom, i64, i64)>> {
        let mut out = self.term()?;
        while self.peek() == Some(b'+') {
            self.at += 1;
            out.extend(self.term()?);
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<Vec<(ObjectAtom, i64, i64)>> {
        let mut parts = match self.peek() {
            Some(b'(') => {
                self.at += 1;
                let e = self.expr()?;
                self.eat(b')')?;
                e
            }
            Some(b'A') => {
                self.at += 1;
                // `A[x]` names a face when `x` does; otherwise the bracket is a shift of `A`
                let save = self.at;
                let atom = match self.s.get(self.at) {
                    Some(&open @ (b'[' | b'{')) => {
                        self.at += 1;
                        let close = if open == b'[' { b']' } else { b'}' };
                        let t = self.until(close)?;
                        match (parse_face(self.fan, &t), t.trim().parse::<i64>().is_ok()) {
                            (Ok(f), _) if open == b'[' => ObjectAtom::Closed(f),
                            (Ok(f), _) => ObjectAtom::Point(f),
                            (Err(_), true) => {
                                self.at = save;
                                ObjectAtom::Structure
                            }
                            (Err(e), false) => return Err(e),
                        }
                    }
                    _ => ObjectAtom::Structure,
                };
                vec![(atom, 0, 0)]
            }
            Some(b'L') => {
                self.at += 1;
                if self.s.get(self.at) != Some(&b'<') {
                    return self.err("expected '<' after L");
                }
                self.at += 1;
                vec![(ObjectAtom::Ic(self.face(b'>')?), 0, 0)]
            }
            _ => return self.err("expected A, L or '('"),
        };
        // suffixes: [k] shift, {k} twist, <k> Tate twist [k]{-k}
        loop {
            let (shift, twist) = match self.s.get(self.at) {
                Some(b'[') => {
                    self.at += 1;
                    (self.int(b']')?, 0)
                }
                Some(b'{') => {
                    self.at += 1;
                    (0, self.int(b'}')?)
                }
                Some(b'<') => {
                    self.at += 1;
                    let k = self.int(b'>')?;
                    (k, -k)
                }
                _ => break,
            };
            for p in &mut parts {
                p.1 -= shift;
                p.2 += twist;
            }
        }
        Ok(parts)
    }
}

/// Parses the object mini-language. A summand `(atom, i, k)` is `atom{k}` placed in degree `i`.
pub fn parse_object(fan: &Fan, spec: &str) -> Result<ObjectSpec> {
    let mut p = SpecParser { s: spec.as_bytes(), at: 0, fan };
    let summands = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(ObjectSpec { summands })
}

impl ObjectSpec {
    pub fn to_complex(&self, ctx: &PureCtx) -> Result<LfComplex> {
        let fan = &ctx.fan;
        let mut by_degree: BTreeMap<i64, Vec<LfSheaf>> = BTreeMap::new();
        for (atom, i, k) in &self.summands {
            let s = match atom {
                ObjectAtom::Structure => LfSheaf::structure_sheaf(fan),
                ObjectAtom::Closed(t) => LfSheaf::closed_face(fan, *t),
                ObjectAtom::Point(t) => LfSheaf::point_face(fan, *t),
                ObjectAtom::Ic(s) => (*ctx.ic(*s)?).clone(),
            };
            by_degree.entry(*i).or_default().push(s.shift(*k));
        }
        let terms = by_degree.into_iter().map(|(i, parts)| (i, LfSheaf::direct_sum(&parts))).collect();
        Ok(LfComplex { fan: fan.clone(), terms, diffs: BTreeMap::new() })
    }
}

fn complex_json(fan: &Fan, y: &Complex) -> Value {
    let terms: BTreeMap<String, Vec<String>> = y
        .terms
        .iter()
        .filter(|(_, t)| !t.is_empty())
        .map(|(i, t)| (i.to_string(), t.iter().map(|l| format!("J{}{{{}}}", fan.label(l.face), l.shift)).collect()))
        .collect();
    json!(terms)
}

pub fn kappa_section(ctx: &PureCtx, spec: &str) -> Result<Section> {
    let fan = &ctx.fan;
    let x = parse_object(fan, spec)?.to_complex(ctx)?;
    let y = kappa(&x)?;
    let table = cohomology_table(fan, &y, WIDTH)?;
    let mut text = String::from("terms:\n");
    if let Value::Object(m) = complex_json(fan, &y) {
        for (i, t) in m {
            let _ =
                writeln!(text, "  {i:>3}: {}", t.as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect::<Vec<_>>().join(" ⊕ "));
        }
    }
    text.push_str("stalk cohomology (face: degree/grade/dim):\n");
    let mut coh = BTreeMap::new();
    for (rho, cells) in &table {
        let cells: Vec<Value> = cells.iter().map(|c| json!({ "degree": c.degree, "grade": c.grade, "dim": c.dim })).collect();
        let _ = writeln!(
            text,
            "  {:>10}: {}",
            fan.label(*rho),
            if cells.is_empty() {
                "0".to_string()
            } else {
                cells.iter().map(|c| format!("{}/{}/{}", c["degree"], c["grade"], c["dim"])).collect::<Vec<_>>().join(" ")
            }
        );
        coh.insert(fan.label(*rho), cells);
    }
    Ok(Section {
        results: json!({ "object": spec, "terms": complex_json(fan, &y), "stalk_cohomology": coh }),
        verdicts: vec![Verdict::new("d² = 0", y.is_complex(&crate::homotopy_cat::CoCat::new(fan))?)],
        text,
    })
}

/// Perversity of `K(ℒ^σ)` for every `σ`.
pub fn verify_perversity(ctx: &PureCtx) -> Result<Section> {
    let fan = &ctx.fan;
    let mut results = Vec::new();
    let mut verdicts = Vec::new();
    let mut text = String::new();
    for s in 0..fan.num_faces() {
        let r = check_perversity(fan, &injective(ctx, s)?, WIDTH)?;
        let _ = writeln!(text, "  K(L{}): {}", fan.label(s), if r.pass { "perverse" } else { "not perverse" });
        verdicts.push(Verdict::new(format!("K(L{}) perverse", fan.label(s)), r.pass));
        results.push(json!({ "sigma": fan.label(s), "report": r }));
    }
    Ok(Section { results: json!(results), verdicts, text })
}

/// Weight-0 purity of `K(ℒ^σ)` for every `σ`.
pub fn verify_purity(ctx: &PureCtx) -> Result<Section> {
    let fan = &ctx.fan;
    let mut results = Vec::new();
    let mut verdicts = Vec::new();
    let mut text = String::new();
    for s in 0..fan.num_faces() {
        let r = check_purity(fan, &injective(ctx, s)?, 0, WIDTH)?;
        let bad = r.rows.iter().filter(|x| !x.pass).count();
        let _ = writeln!(text, "  K(L{}): {} of {} rows fail", fan.label(s), bad, r.rows.len());
        verdicts.push(Verdict::new(format!("K(L{}) pure of weight 0", fan.label(s)), r.pass));
        results.push(json!({ "sigma": fan.label(s), "report": r }));
    }
    Ok(Section { results: json!(results), verdicts, text })
}

/// Acyclicity of the cellular complex of the constant diagram on `[ξ, η]` for `ξ < η`.
pub fn verify_cech(fan: &Arc<Fan>) -> Result<Section> {
    let o = fan.zero_cone();
    let mut results = Vec::new();
    let mut verdicts = Vec::new();
    let mut text = String::new();
    for xi in 0..fan.num_faces() {
        for eta in 0..fan.num_faces() {
            if !fan.lt(xi, eta) {
                continue;
            }
            let c = cellular_complex(&constant_diagram(fan, xi, eta)?)?;
            let h = realized_cohomology(fan, &stalk_complex(fan, &c, o)?, -2, 2);
            let total: usize = h.iter().map(|c| c.dim).sum();
            let name = format!("C({}, {}) acyclic", fan.label(xi), fan.label(eta));
            let _ = writeln!(text, "  {name}: total cohomology {total}");
            verdicts.push(Verdict::new(name, total == 0));
            results.push(json!({ "xi": fan.label(xi), "eta": fan.label(eta), "cohomology": total }));
        }
    }
    Ok(Section { results: json!(results), verdicts, text })
}

/// Homs between simples, and κ against derived Homs of standard sheaves.
pub fn verify_homs(ctx: &PureCtx) -> Result<Section> {
    let fan = &ctx.fan;
    let nf = fan.num_faces();
    let mut negative_ok = true;
    let mut degree_zero_ok = true;
    let mut simples = Vec::new();
    for s in 0..nf {
        for t in 0..nf {
            let dims: Vec<usize> = (-3..=0).map(|n| ctx.hom_dim(s, t, n)).collect::<Result<_>>()?;
            negative_ok &= dims[..3].iter().all(|&d| d == 0);
            let h = ctx.hom(s, t, 0)?;
            let ok = if s == t {
                let id = LfMap::identity(&*ctx.ic(s)?);
                h.dim() == 1 && h.basis[0] == id
            } else {
                h.dim() == 0
            };
            degree_zero_ok &= ok;
            simples.push(json!({ "sigma": fan.label(s), "tau": fan.label(t), "dims_n_-3_to_0": dims }));
        }
    }
    // κ(X{k}) = κ(X){k}, so the twists |k|, |l| ≤ 2 only enter through n = l - k
    let mut ff = Vec::new();
    let mut ff_ok = true;
    let closed: Vec<(Complex, Complex)> = (0..nf)
        .map(|t| {
            let x = LfComplex::single(&LfSheaf::closed_face(fan, t), 0);
            Ok((pure_replacement(ctx, &x)?, kappa(&x)?))
        })
        .collect::<Result<_>>()?;
    let points: Vec<(Complex, Complex)> = (0..nf)
        .map(|t| {
            let y = LfComplex::single(&LfSheaf::point_face(fan, t), 0);
            Ok((pure_replacement(ctx, &y)?, kappa(&y)?))
        })
        .collect::<Result<_>>()?;
    for tau in 0..nf {
        for xi in 0..nf {
            for n in -4..=4i64 {
                let co = co_hom(fan, &closed[tau].1, &points[xi].1, n)?;
                let kb = kb_hom(ctx, &closed[tau].0, &points[xi].0, n)?.dim;
                let expect = if tau == xi { grade_dim(fan.dim(tau), n) } else { 0 };
                ff_ok &= co == kb && kb == expect;
                ff.push(json!({ "tau": fan.label(tau), "xi": fan.label(xi), "n": n, "co_hom": co, "kb_hom": kb, "closed_form": expect }));
            }
        }
    }
    let text = format!("  {} ordered pairs of simples, {} pairs of standard sheaves compared under κ\n", nf * nf, ff.len());
    Ok(Section {
        results: json!({ "simples": simples, "full_faithfulness": ff }),
        verdicts: vec![
            Verdict::new("Hom(L, L{n}) = 0 for -3 ≤ n < 0", negative_ok),
            Verdict::new("Hom(L^σ, L^τ) = δ with identity basis", degree_zero_ok),
            Verdict::new("co_hom(κX, κY) = Hom(X, Y) = closed form", ff_ok),
        ],
        text,
    })
}

/// Truncations of seeded random complexes, and heart normal forms of their perverse cohomology.
pub fn verify_truncation(ctx: &PureCtx, count: usize, seed: u64) -> Result<Section> {
    let fan = &ctx.fan;
    let faces: Vec<FaceId> = (0..fan.num_faces()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut results = Vec::new();
    let (mut trunc_ok, mut orth_ok, mut heart_ok) = (true, true, true);
    for _ in 0..count {
        let x = random_complex(ctx, &mut rng, &faces, -1, 1, 2, 1)?;
        let t = truncate(ctx, &x)?;
        let sides = in_le0(ctx, &t.e)? && in_ge1(ctx, &t.n)?;
        let maps = t.iota.is_chain_map(ctx, &t.e, &x)? && t.pi.is_chain_map(ctx, &x, &t.n)?;
        let comp = t.pi.compose(ctx, &t.iota, &t.e, &x, &t.n)?;
        let exact = homotopy_hom(ctx, &t.e, &t.n)?.is_null(&comp) && labels_split(ctx, &x, &t.e, &t.n)?;
        // ⟨n⟩ preserves the t-structure and [-j] maps K≥1 into itself
        let mut orth = Vec::new();
        for n in -2..=2 {
            orth.push(homotopy_hom(ctx, &t.e, &t.n.tate(n))?.dim);
        }
        for j in 1..=2 {
            orth.push(homotopy_hom(ctx, &t.e, &t.n.shift(-j))?.dim);
        }
        let mut ambiguity = Vec::new();
        for h in perverse_cohomology(ctx, &x)?.values() {
            let nf = heart_normal_form(ctx, &h.complex)?;
            ambiguity.push(homotopy_ambiguity(ctx, &nf.complex, &nf.complex)?);
        }
        trunc_ok &= sides && maps && exact;
        orth_ok &= orth.iter().all(|&d| d == 0);
        heart_ok &= ambiguity.iter().all(|&a| a == 0);
        results.push(json!({
            "labels": x.labels().len(),
            "e_labels": t.e.labels().len(),
            "n_labels": t.n.labels().len(),
            "orthogonality": orth,
            "heart_ambiguity": ambiguity,
        }));
    }
    Ok(Section {
        text: format!("  {count} random complexes (seed {seed})\n"),
        results: json!(results),
        verdicts: vec![
            Verdict::new("E ∈ K≤0, N ∈ K≥1, E → X → N", trunc_ok),
            Verdict::new("Hom(E, N⟨n⟩) = Hom(E, N[-j]) = 0", orth_ok),
            Verdict::new("heart normal forms have zero ambiguity", heart_ok),
        ],
    })
}

/// The minimal model of `X` has the labels of `E` and `N` together.
fn labels_split(ctx: &PureCtx, x: &Complex, e: &Complex, n: &Complex) -> Result<bool> {
    let key = |c: &Complex| -> Result<Vec<(i64, FaceId, i64)>> {
        let mut v: Vec<_> = minimize(ctx, c)?.labels().iter().map(|l| (l.degree, l.face, l.shift)).collect();
        v.sort();
        Ok(v)
    };
    let mut both = key(e)?;
    both.extend(key(n)?);
    both.sort();
    Ok(key(x)? == both)
}

pub fn rings_section(ctx: &PureCtx, what: RingsCmd, degree: i64) -> Result<Section> {
    let r = end_ring_r(ctx, degree)?;
    let v = end_ring_rvee(ctx, degree)?;
    match what {
        RingsCmd::Compute => {
            let mut text = String::new();
            for ring in [&r, &v] {
                let dims: Vec<String> = (0..=degree).map(|n| ring.dim(n).to_string()).collect();
                let _ = writeln!(text, "  {:<4} dims {}", ring.name, dims.join(" "));
            }
            Ok(Section {
                results: json!({ "R": r.to_json(), "Rvee": v.to_json() }),
                verdicts: vec![Verdict::new("associative", r.is_associative() && v.is_associative())],
                text,
            })
        }
        RingsCmd::Check => {
            let k = koszul_checks(&r, &v, degree);
            let mut text = String::new();
            let _ = writeln!(text, "  R    dims {:?}", k.r_dims.values().collect::<Vec<_>>());
            let _ = writeln!(text, "  R^∨  dims {:?}", k.rvee_dims.values().collect::<Vec<_>>());
            let _ = writeln!(text, "  {:>10} {:>10}  R1 R∨1  R2 R∨2  R1R1", "src", "dst");
            for p in &k.pairs {
                let _ = writeln!(
                    text,
                    "  {:>10} {:>10}  {:>2} {:>3}  {:>2} {:>3}  {:>4}",
                    p.src, p.dst, p.r1, p.rvee1_transposed, p.r2, p.rvee2_transposed, p.r1_r1
                );
            }
            let verdicts = vec![
                Verdict::new("associativity", k.associative),
                Verdict::new("(i) positivity and semisimple degree 0", k.positivity),
                Verdict::new("(ii) generation in degree 1", k.generation),
                Verdict::new("(iii) dim R_1 = dim R^∨_1 per face pair", k.degree_one),
                Verdict::new("(iv) dim R_2 + dim R^∨_2 = dim R_1 ⊗ R_1 per face pair", k.quadratic),
            ];
            Ok(Section { results: serde_json::to_value(&k).expect("report serializes"), verdicts, text })
        }
    }
}

/// Exit code for an error: 2 for usage problems, 3 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_) | Error::FaceNotInFan(_) | Error::MalformedDocument(_) => 2,
        _ => 3,
    }
}

/// Structured diagnostic for an error.
pub fn error_json(e: &Error) -> String {
    let kind = format!("{e:?}");
    let kind = kind.split(['(', ' ', '{']).next().unwrap_or("Error").to_string();
    serde_json::to_string_pretty(&json!({ "error": e.to_string(), "kind": kind })).unwrap() + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn object_specs() {
        let fan = fixtures::fx1();
        let top = fan.top().unwrap();
        let o = parse_object(&fan, "A[0,1]").unwrap();
        assert_eq!(o.summands, vec![(ObjectAtom::Closed(top), 0, 0)]);
        let o = parse_object(&fan, "A{0,1}[1]{2}").unwrap();
        assert_eq!(o.summands, vec![(ObjectAtom::Point(top), -1, 2)]);
        let o = parse_object(&fan, "(L<o> + A)<1>").unwrap();
        assert_eq!(o.summands, vec![(ObjectAtom::Ic(fan.zero_cone()), -1, -1), (ObjectAtom::Structure, -1, -1)]);
        assert!(matches!(parse_object(&fan, "A[0,5]"), Err(Error::FaceNotInFan(_))));
        // an integer that names no face is a shift of `A`
        assert_eq!(parse_object(&fan, "A[5]").unwrap().summands, vec![(ObjectAtom::Structure, -5, 0)]);
        assert_eq!(parse_object(&fan, "A[-1]{2}").unwrap().summands, vec![(ObjectAtom::Structure, 1, 2)]);
        assert_eq!(parse_object(&fan, "A[1]").unwrap().summands, vec![(ObjectAtom::Closed(fan.parse_face("1").unwrap()), 0, 0)]);
        assert!(matches!(parse_object(&fan, "B"), Err(Error::Usage(_))));
        assert!(matches!(parse_object(&fan, "A{1"), Err(Error::Usage(_))));
        assert!(matches!(parse_object(&fan, "A[1] x"), Err(Error::Usage(_))));
    }

    #[test]
    fn object_shift_matches_complex_shift() {
        let c = PureCtx::new(&Arc::new(fixtures::fx3()));
        let x = parse_object(&c.fan, "A{1}[2]").unwrap().to_complex(&c).unwrap();
        assert_eq!(x.range(), Some((-2, -2)));
    }

    #[test]
    fn error_codes() {
        assert_eq!(exit_code(&Error::Usage("x".into())), 2);
        assert_eq!(exit_code(&Error::CutoffTooSmall { cutoff: 1 }), 3);
        assert!(error_json(&Error::CutoffTooSmall { cutoff: 1 }).contains("CutoffTooSmall"));
    }
}
