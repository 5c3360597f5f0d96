//! The `triplekit` command line: argument parsing, dispatch and reports.
//!
//! [`run`] returns the exit code and the JSON printed on stdout, so the
//! binary is a thin wrapper and everything here is testable in-process.

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::dicyclic::DicyclicTernary;
use crate::fixtures;
use crate::fkts::Fkts;
use crate::io::{self, Algebra, AnyAlgebra, FormatError, Kind};
use crate::jternary::JTernary;
use crate::liebuild::{self, GradeTag, LieAlgebra};
use crate::linalg::{unit_vec, Vector};
use crate::report::Report;
use crate::scalars::{Cyc, Scalar};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "triplekit", version, about = "Exact verification of triple systems and their Lie algebras")]
pub struct Cli {
    /// Indent the JSON report.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the full axiom suite for the file's kind.
    Verify {
        file: PathBuf,
        #[arg(long)]
        kind: Option<String>,
    },
    /// Build a new algebra from the file and verify it.
    Construct {
        file: PathBuf,
        #[arg(long, value_enum)]
        target: Target,
        /// Unit coordinates for `jt-from-dic` and `g-a`, comma separated.
        #[arg(long)]
        unit: Option<String>,
        /// Search the basis vectors for a unit.
        #[arg(long)]
        find_unit_from_basis: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a composite of constructions and compare with the input.
    Roundtrip {
        file: PathBuf,
        #[arg(long, value_enum)]
        cycle: Cycle,
        #[arg(long)]
        unit: Option<String>,
    },
    /// sl2 isotypic decomposition of a Lie file.
    Decompose {
        file: PathBuf,
        /// `H;E;F`, each a comma separated coordinate list. Defaults to the file's frame.
        #[arg(long, allow_hyphen_values = true)]
        frame: Option<String>,
    },
    /// The bundled example algebras.
    Fixtures {
        #[command(subcommand)]
        action: FixtureAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum FixtureAction {
    List,
    Emit { name: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    GJt,
    #[value(name = "g-a")]
    GA,
    #[value(name = "g-u")]
    GU,
    FktsFromJt,
    JtFromFkts,
    DicFromJt,
    JtFromDic,
    DicFromFkts,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Cycle {
    JtFkts,
    JtDic,
    FktsDicLie,
    JtDicLie,
}

/// A command's result: exit code and stdout payload.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub output: Value,
    /// Printed verbatim instead of `output` (fixture text).
    pub raw: Option<String>,
}

impl Outcome {
    pub fn stdout(&self, pretty: bool) -> String {
        match &self.raw {
            Some(t) => t.clone(),
            None => render(&self.output, pretty) + "\n",
        }
    }
}

enum Failure {
    Input(String),
    Math(String),
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn math(e: impl std::fmt::Display) -> Failure {
    Failure::Math(e.to_string())
}

fn input(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

type Res<T> = Result<T, Failure>;

/// Caps the global rayon pool from `TRIPLEKIT_THREADS`; ignores bad values.
pub fn init_threads() {
    if let Some(n) = std::env::var("TRIPLEKIT_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

/// Renders a payload the way the binary prints it.
pub fn render(v: &Value, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(v).expect("values serialize")
    } else {
        v.to_string()
    }
}

pub fn run(cli: &Cli) -> Outcome {
    if let Command::Fixtures { action: FixtureAction::Emit { name } } = &cli.command {
        return match fixtures::text(name) {
            Some(t) => Outcome { code: EXIT_PASS, output: Value::Null, raw: Some(t.to_string()) },
            None => Outcome {
                code: EXIT_INPUT,
                output: json!({ "command": "fixtures", "status": "error", "error": format!("unknown fixture {name:?}") }),
                raw: None,
            },
        };
    }
    let name = match &cli.command {
        Command::Verify { .. } => "verify",
        Command::Construct { .. } => "construct",
        Command::Roundtrip { .. } => "roundtrip",
        Command::Decompose { .. } => "decompose",
        Command::Fixtures { .. } => "fixtures",
    };
    let result = match &cli.command {
        Command::Verify { file, kind } => verify(file, kind.as_deref()),
        Command::Construct { file, target, unit, find_unit_from_basis, out } => {
            construct(file, *target, unit.as_deref(), *find_unit_from_basis, out.as_ref())
        }
        Command::Roundtrip { file, cycle, unit } => roundtrip(file, *cycle, unit.as_deref()),
        Command::Decompose { file, frame } => decompose(file, frame.as_deref()),
        Command::Fixtures { action } => fixtures_cmd(action),
    };
    match result {
        Ok((reports, mut extra)) => {
            let passed = reports.iter().all(Report::passed);
            let mut out = json!({ "command": name, "status": if passed { "pass" } else { "fail" } });
            let obj = out.as_object_mut().expect("object");
            obj.append(&mut extra);
            if !reports.is_empty() {
                obj.insert("reports".into(), serde_json::to_value(&reports).expect("reports serialize"));
            }
            Outcome { code: if passed { EXIT_PASS } else { EXIT_FAIL }, output: out, raw: None }
        }
        Err(Failure::Input(msg)) => {
            Outcome { code: EXIT_INPUT, output: json!({ "command": name, "status": "error", "error": msg }), raw: None }
        }
        Err(Failure::Math(msg)) => {
            Outcome { code: EXIT_FAIL, output: json!({ "command": name, "status": "fail", "error": msg }), raw: None }
        }
    }
}

type Extra = serde_json::Map<String, Value>;

fn load(path: &PathBuf, kind: Option<Kind>) -> Res<AnyAlgebra> {
    let text = fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    Ok(io::parse(&text, kind)?)
}

fn verify(path: &PathBuf, kind: Option<&str>) -> Res<(Vec<Report>, Extra)> {
    let kind = match kind {
        Some(k) => Some(Kind::parse(k).ok_or_else(|| input(format!("unknown kind {k:?}")))?),
        None => None,
    };
    let any = load(path, kind)?;
    let mut extra = Extra::new();
    extra.insert("kind".into(), json!(any.kind().name()));
    let reports = match &any {
        AnyAlgebra::Q(a) => suite(a),
        AnyAlgebra::W(a) => suite(a),
    };
    Ok((reports, extra))
}

/// The axiom suite `verify` runs for each kind.
pub fn suite<S: Scalar>(a: &Algebra<S>) -> Vec<Report> {
    match a {
        Algebra::Fkts(u) => vec![u.full_report()],
        Algebra::Jternary(s) => {
            let mut r = s.check_jt_axioms();
            r.insert("summary", s.summary());
            vec![r, s.check_theorem_jt()]
        }
        Algebra::Dicyclic(d) => vec![d.check_d_axioms()],
        Algebra::Lie(g) => vec![g.report()],
    }
}

fn parse_unit<S: Scalar>(text: &str, n: usize) -> Res<Vector<S>> {
    Ok(io::parse_dense(text, n, "--unit")?)
}

fn pick_unit<S: Scalar>(a: &DicyclicTernary<S>, unit: Option<&str>, search: bool) -> Res<Option<Vector<S>>> {
    match (unit, search) {
        (Some(t), _) => Ok(Some(parse_unit(t, a.dim())?)),
        (None, true) => {
            let candidates: Vec<Vector<S>> = (0..a.dim()).map(|i| unit_vec(a.dim(), i)).collect();
            a.find_unit(&candidates).map(Some).ok_or_else(|| math("no basis vector is a unit"))
        }
        (None, false) => Ok(None),
    }
}

fn construct(
    path: &PathBuf,
    target: Target,
    unit: Option<&str>,
    search: bool,
    out: Option<&PathBuf>,
) -> Res<(Vec<Report>, Extra)> {
    let any = load(path, None)?;
    let (built, reports) = match &any {
        AnyAlgebra::Q(a) => build(a, target, unit, search).map(|(b, r)| (io::to_text(&b), r))?,
        AnyAlgebra::W(a) => build(a, target, unit, search).map(|(b, r)| (io::to_text(&b), r))?,
    };
    let mut extra = Extra::new();
    extra.insert("target".into(), json!(target.to_possible_value().map(|v| v.get_name().to_string())));
    if !reports.iter().all(Report::passed) {
        return Ok((reports, extra));
    }
    match out {
        Some(p) => {
            fs::write(p, &built).map_err(|e| input(format!("{}: {e}", p.display())))?;
            extra.insert("out".into(), json!(p.display().to_string()));
        }
        None => {
            let v: Value = serde_json::from_str(&built).expect("own output parses");
            extra.insert("output".into(), v);
        }
    }
    Ok((reports, extra))
}

fn expect_kind(a_kind: Kind, want: Kind) -> Res<()> {
    if a_kind == want {
        Ok(())
    } else {
        Err(input(format!("expected a {} file, got {}", want.name(), a_kind.name())))
    }
}

fn build<S: Scalar>(a: &Algebra<S>, target: Target, unit: Option<&str>, search: bool) -> Res<(Algebra<S>, Vec<Report>)> {
    use Target::*;
    let want = match target {
        GJt | FktsFromJt | DicFromJt => Kind::Jternary,
        GU | JtFromFkts | DicFromFkts => Kind::Fkts,
        GA | JtFromDic => Kind::Dicyclic,
    };
    expect_kind(a.kind(), want)?;
    let built = match (target, a) {
        (GJt, Algebra::Jternary(s)) => Algebra::Lie(liebuild::build_g_jt(s).map_err(math)?),
        (FktsFromJt, Algebra::Jternary(s)) => Algebra::Fkts(s.to_fkts().map_err(math)?),
        (DicFromJt, Algebra::Jternary(s)) => Algebra::Dicyclic(DicyclicTernary::from_jternary(s).map_err(math)?),
        (GU, Algebra::Fkts(u)) => Algebra::Lie(liebuild::build_g_u(u).map_err(math)?),
        (JtFromFkts, Algebra::Fkts(u)) => Algebra::Jternary(JTernary::from_special_fkts(u).map_err(math)?),
        (DicFromFkts, Algebra::Fkts(u)) => Algebra::Dicyclic(DicyclicTernary::from_fkts_11(u).map_err(math)?),
        (GA, Algebra::Dicyclic(d)) => {
            let (g, _) = liebuild::build_g_a(d).map_err(math)?;
            let g = match pick_unit(d, unit, search)? {
                Some(e) => {
                    let fr = liebuild::frame_from_unit(&g, d, &e).map_err(math)?;
                    g.with_frame(fr).map_err(math)?
                }
                None => g,
            };
            Algebra::Lie(g)
        }
        (JtFromDic, Algebra::Dicyclic(d)) => {
            let e = pick_unit(d, unit, search)?
                .ok_or_else(|| input("jt-from-dic needs --unit or --find-unit-from-basis"))?;
            Algebra::Jternary(d.to_jternary(&e).map_err(math)?)
        }
        _ => unreachable!("kind checked above"),
    };
    let reports = suite(&built);
    Ok((built, reports))
}

fn roundtrip(path: &PathBuf, cycle: Cycle, unit: Option<&str>) -> Res<(Vec<Report>, Extra)> {
    let any = load(path, None)?;
    let report = match cycle {
        Cycle::FktsDicLie | Cycle::JtDicLie => lie_cycle(&any.to_cyc(), cycle)?,
        _ => match &any {
            AnyAlgebra::Q(a) => plain_cycle(a, cycle, unit)?,
            AnyAlgebra::W(a) => plain_cycle(a, cycle, unit)?,
        },
    };
    Ok((vec![report], Extra::new()))
}

fn equality(r: &mut Report, name: &str, result: Result<(), String>) {
    r.push(match result {
        Ok(()) => crate::report::Check::pass(name),
        Err(e) => crate::report::Check::fail(name, e),
    });
}

fn fkts_equal<S: Scalar>(a: &Fkts<S>, b: &Fkts<S>) -> Result<(), String> {
    if (a.epsilon, a.delta) != (b.epsilon, b.delta) {
        return Err("signs differ".into());
    }
    if a.triple != b.triple {
        let first = a.triple.entries().into_iter().chain(b.triple.entries()).find(|(i, j, k, l, _)| a.triple.get(*i, *j, *k, *l) != b.triple.get(*i, *j, *k, *l));
        return Err(match first {
            Some((i, j, k, l, _)) => format!("triple products differ at ({i},{j},{k}) in coordinate {l}"),
            None => "triple shapes differ".into(),
        });
    }
    Ok(())
}

fn plain_cycle<S: Scalar>(a: &Algebra<S>, cycle: Cycle, unit: Option<&str>) -> Res<Report> {
    let mut r = Report::new(format!("roundtrip.{}", a.kind().name()));
    match (cycle, a) {
        (Cycle::JtFkts, Algebra::Jternary(s)) => {
            let back = JTernary::from_special_fkts(&s.to_fkts().map_err(math)?).map_err(math)?;
            equality(&mut r, "jt_fkts_jt", s.compare_via_action(&back));
            r.insert("identical_tensors", back.j.product == s.j.product && back.angle == s.angle && back.action == s.action);
        }
        (Cycle::JtFkts, Algebra::Fkts(u)) => {
            let back = JTernary::from_special_fkts(u).map_err(math)?.to_fkts().map_err(math)?;
            equality(&mut r, "fkts_jt_fkts", fkts_equal(u, &back));
        }
        (Cycle::JtDic, Algebra::Jternary(s)) => {
            let d = DicyclicTernary::from_jternary(s).map_err(math)?;
            let e: Vector<S> = s.j.unit.iter().cloned().chain((0..s.nt()).map(|_| S::zero())).collect();
            let back = d.to_jternary(&e).map_err(math)?;
            equality(&mut r, "jt_dic_jt", s.compare_via_action(&back));
            r.insert("identical_tensors", back.j.product == s.j.product && back.angle == s.angle && back.action == s.action && back.triple == s.triple);
        }
        (Cycle::JtDic, Algebra::Dicyclic(d)) => {
            let e = pick_unit(d, unit, unit.is_none())?.expect("search requested");
            let back = DicyclicTernary::from_jternary(&d.to_jternary(&e).map_err(math)?).map_err(math)?;
            equality(&mut r, "dic_jt_dic", d.compare(&back));
            r.insert("unit", crate::report::vector_json(&e));
        }
        (c, a) => return Err(input(format!("cycle {c:?} does not start from a {} file", a.kind().name()))),
    }
    Ok(r)
}

fn lie_cycle(a: &Algebra<Cyc>, cycle: Cycle) -> Res<Report> {
    let mut r = Report::new("roundtrip.lie");
    let (direct, via_lie) = match (cycle, a) {
        (Cycle::FktsDicLie, Algebra::Fkts(u)) => {
            let direct = DicyclicTernary::from_fkts_11(u).map_err(math)?;
            let g = liebuild::build_g_u(u).map_err(math)?;
            let act = liebuild::attach_dic3_to_gu(&g, u).map_err(math)?;
            let basis = liebuild::gu_omega_basis(&g).map_err(math)?;
            (direct, DicyclicTernary::from_lie_with_dic3(&g, &act, Some(basis), None).map_err(math)?)
        }
        (Cycle::JtDicLie, Algebra::Jternary(s)) => {
            let direct = DicyclicTernary::from_jternary(s).map_err(math)?;
            let g = liebuild::build_g_jt(s).map_err(math)?;
            let act = liebuild::attach_dic3_to_gjt(&g).map_err(math)?;
            let basis = liebuild::gjt_omega_basis(&g).map_err(math)?;
            (direct, DicyclicTernary::from_lie_with_dic3(&g, &act, Some(basis), None).map_err(math)?)
        }
        (c, a) => return Err(input(format!("cycle {c:?} does not start from a {} file", a.kind().name()))),
    };
    equality(&mut r, "direct_equals_via_lie", direct.compare(&via_lie));
    Ok(r)
}

fn parse_frame_arg<S: Scalar>(text: &str, n: usize) -> Res<[Vector<S>; 3]> {
    let parts: Vec<&str> = text.split(';').collect();
    if parts.len() != 3 {
        return Err(input("--frame: expected H;E;F"));
    }
    let names = ["--frame H", "--frame E", "--frame F"];
    let mut out = Vec::with_capacity(3);
    for (p, name) in parts.iter().zip(names) {
        out.push(io::parse_dense(p, n, name)?);
    }
    Ok(out.try_into().expect("three parts"))
}

fn decompose(path: &PathBuf, frame: Option<&str>) -> Res<(Vec<Report>, Extra)> {
    let any = load(path, None)?;
    expect_kind(any.kind(), Kind::Lie)?;
    let (mut r, framed) = match any {
        AnyAlgebra::Q(Algebra::Lie(g)) => {
            let g = framed(g, frame)?;
            (liebuild::bc1_report(&g), AnyAlgebra::Q(Algebra::Lie(g)))
        }
        AnyAlgebra::W(Algebra::Lie(g)) => {
            let g = framed(g, frame)?;
            (liebuild::bc1_report(&g), AnyAlgebra::W(Algebra::Lie(g)))
        }
        _ => unreachable!("kind checked above"),
    };
    // Algebras laid out as sl⊗J ⊕ V⊗T also get their φ-eigenspace dimensions.
    if let Algebra::Lie(gc) = framed.to_cyc() {
        if gc.grades.as_ref().is_some_and(|t| t.contains(&GradeTag::SlJ)) {
            if let Ok(act) = liebuild::attach_dic3_to_gjt(&gc) {
                if act.verify(&gc).is_ok() {
                    r.insert("phi_eigen_dims", json!(act.eigen_dims().map_err(math)?));
                }
            }
        }
    }
    Ok((vec![r], Extra::new()))
}

fn framed<S: Scalar>(g: LieAlgebra<S>, frame: Option<&str>) -> Res<LieAlgebra<S>> {
    match frame {
        Some(t) => {
            let fr = parse_frame_arg(t, g.dim())?;
            g.with_frame(fr).map_err(input)
        }
        None => match &g.frame {
            Some(fr) => {
                liebuild::check_frame(&g, fr).map_err(input)?;
                Ok(g)
            }
            None => Err(input("no frame in file and none given")),
        },
    }
}

fn fixtures_cmd(action: &FixtureAction) -> Res<(Vec<Report>, Extra)> {
    let mut extra = Extra::new();
    match action {
        FixtureAction::List => {
            let list: Vec<Value> = fixtures::FIXTURES
                .iter()
                .map(|(name, desc, text)| {
                    let kind = io::parse(text, None).map(|a| a.kind().name()).unwrap_or("invalid");
                    json!({ "name": name, "kind": kind, "description": desc })
                })
                .collect();
            extra.insert("fixtures".into(), Value::Array(list));
        }
        FixtureAction::Emit { .. } => unreachable!("handled in run"),
    }
    Ok((Vec::new(), extra))
}

/// Re-reads constructed output: parsing then printing is the identity.
pub fn reparse_is_identity(text: &str) -> bool {
    match io::parse(text, None) {
        Ok(AnyAlgebra::Q(a)) => io::to_text(&a) == text,
        Ok(AnyAlgebra::W(a)) => io::to_text(&a) == text,
        Err(_) => false,
    }
}
