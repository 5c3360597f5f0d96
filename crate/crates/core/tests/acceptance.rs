//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::*;
use triplekit::dicyclic::DicyclicTernary;
use triplekit::fixtures;
use triplekit::jternary::JTernary;
use triplekit::liebuild::*;
use triplekit::report::Status;
use triplekit::scalars::Cyc;

type Outcome = Result<(), String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

const FKTS: [&str; 6] = ["zero-1", "zero-2", "zero-3", "fkts-b", "osp", "jts"];

fn axiom_gates() -> Outcome {
    for name in FKTS {
        let u = fkts::<Q>(name);
        for r in [u.check_fk(), u.check_st_identities(), u.check_prop_ss(), u.check_k_identities()] {
            ensure(r.passed(), || format!("{name}: {} fails", r.subject))?;
        }
    }
    // +1 single-entry mutants; the line systems with negative epsilon are
    // rescalings of themselves and are excluded.
    for name in ["zero-1", "zero-2", "zero-3", "fkts-b"] {
        let u = fkts::<Q>(name);
        let n = u.dim();
        let mut rejected = 0;
        for t in 0..n.pow(4) {
            let (i, j, k, l) = (t / (n * n * n), (t / (n * n)) % n, (t / n) % n, t % n);
            let mut m = u.clone();
            m.triple.set(i, j, k, l, m.triple.get(i, j, k, l).clone() + &q(1));
            let mut r = m.check_fk();
            r.extend(m.check_st_identities());
            r.extend(m.check_k_identities());
            if let Some(c) = r.checks.iter().find(|c| c.status == Status::Fail) {
                let cx = c.counterexample.as_ref().ok_or_else(|| format!("{name}: {} has no counterexample", c.name))?;
                ensure(cx.lhs != cx.rhs, || format!("{name}: empty counterexample"))?;
                rejected += 1;
            }
        }
        ensure(rejected >= n.pow(4).min(5), || format!("{name}: only {rejected} mutants rejected"))?;
    }
    Ok(())
}

fn j_ternary_suite() -> Outcome {
    for name in ["sp2", "osp-jt"] {
        let s = jt::<Q>(name);
        ensure(s.check_jt_axioms().passed(), || format!("{name}: axioms"))?;
        ensure(s.check_theorem_jt().passed(), || format!("{name}: operator identities"))?;
    }
    Ok(())
}

fn constructions_are_lie() -> Outcome {
    let defect = |g: &LieAlgebra<Q>| g.jacobi_defect().map(|d| d.is_empty()).unwrap_or(false);
    let g = build_g_jt(&jt::<Q>("sp2")).map_err(|e| e.to_string())?;
    ensure(g.dim() == 10 && defect(&g), || "g(sp2)".into())?;
    let g = build_g_jt(&jt::<Q>("osp-jt")).map_err(|e| e.to_string())?;
    ensure(g.super_dim() == (3, 2) && defect(&g), || "g(osp-jt)".into())?;
    let g = build_g_u(&fkts::<Q>("fkts-b")).map_err(|e| e.to_string())?;
    ensure(g.grade_dims() == Some([1, 2, 4, 2, 1]) && defect(&g), || "g(fkts-b)".into())?;
    let g = build_g_u(&fkts::<Q>("osp")).map_err(|e| e.to_string())?;
    ensure(g.super_dim() == (3, 2) && defect(&g), || "g(osp)".into())?;
    let (g, _) = build_g_a(&dic::<Q>("dic-sp2")).map_err(|e| e.to_string())?;
    ensure(g.dim() == 10 && defect(&g), || "g(dic-sp2)".into())
}

fn decomposition() -> Outcome {
    let mult = |d: Bc1Decomposition| (d.adjoint, d.natural, d.trivial, d.verified);
    let g = build_g_jt(&jt::<Q>("sp2")).map_err(|e| e.to_string())?;
    ensure(mult(bc1_decompose(&g).map_err(|e| e.to_string())?) == (1, 2, 3, true), || "g(sp2)".into())?;
    let a = dic::<Q>("dic-sp2");
    let (g, _) = build_g_a(&a).map_err(|e| e.to_string())?;
    let frame = frame_from_unit(&g, &a, &[q(1), q(0), q(0)]).map_err(|e| e.to_string())?;
    let g = g.with_frame(frame).map_err(|e| e.to_string())?;
    ensure(mult(bc1_decompose(&g).map_err(|e| e.to_string())?) == (1, 2, 3, true), || "g(dic-sp2)".into())?;
    let sl2 = LieAlgebra::<Q>::sl2();
    ensure(mult(bc1_decompose(&sl2).map_err(|e| e.to_string())?) == (1, 0, 0, true), || "sl2".into())
}

fn embedding() -> Outcome {
    for name in ["fkts-b", "osp"] {
        let m = embed_gu_in_gjt(&fkts::<Q>(name)).map_err(|e| e.to_string())?;
        ensure(m.verified() && m.bijective(), || format!("{name}: {:?}", m.homomorphism))?;
    }
    Ok(())
}

fn dicyclic_relations() -> Outcome {
    let g = build_g_jt(&jt::<Cyc>("sp2")).map_err(|e| e.to_string())?;
    let act = attach_dic3_to_gjt(&g).map_err(|e| e.to_string())?;
    act.verify(&g).map_err(|e| e.to_string())?;
    ensure(act.eigen_dims().map_err(|e| e.to_string())? == [4, 3, 3], || "eigenspaces of g(sp2)".into())?;
    for name in ["fkts-b", "osp", "jts", "zero-2"] {
        let u = fkts::<Cyc>(name);
        let g = build_g_u(&u).map_err(|e| e.to_string())?;
        let act = attach_dic3_to_gu(&g, &u).map_err(|e| e.to_string())?;
        act.verify(&g).map_err(|e| format!("{name}: {e}"))?;
        if name == "jts" {
            ensure(act.is_s3(), || "jts: theta^2 != 1".into())?;
        }
    }
    Ok(())
}

fn roundtrips() -> Outcome {
    let sp = jt::<Q>("sp2");
    let back = JTernary::from_special_fkts(&sp.to_fkts().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    sp.compare_via_action(&back)?;
    for name in ["fkts-b", "osp"] {
        let u = fkts::<Q>(name);
        let again = JTernary::from_special_fkts(&u).and_then(|s| s.to_fkts()).map_err(|e| e.to_string())?;
        ensure(again.triple == u.triple && again.epsilon == u.epsilon && again.delta == u.delta, || name.into())?;
    }
    let d = DicyclicTernary::from_jternary(&sp).map_err(|e| e.to_string())?;
    let back = d.to_jternary(&[q(1), q(0), q(0)]).map_err(|e| e.to_string())?;
    ensure(back.triple == sp.triple && back.angle == sp.angle && back.action == sp.action, || "jt-dic-jt".into())?;

    let u = fkts::<Cyc>("fkts-b");
    let g = build_g_u(&u).map_err(|e| e.to_string())?;
    let act = attach_dic3_to_gu(&g, &u).map_err(|e| e.to_string())?;
    let basis = gu_omega_basis(&g).map_err(|e| e.to_string())?;
    let via = DicyclicTernary::from_lie_with_dic3(&g, &act, Some(basis), None).map_err(|e| e.to_string())?;
    DicyclicTernary::from_fkts_11(&u).map_err(|e| e.to_string())?.compare(&via)?;

    let s = jt::<Cyc>("sp2");
    let g = build_g_jt(&s).map_err(|e| e.to_string())?;
    let act = attach_dic3_to_gjt(&g).map_err(|e| e.to_string())?;
    let basis = gjt_omega_basis(&g).map_err(|e| e.to_string())?;
    let via = DicyclicTernary::from_lie_with_dic3(&g, &act, Some(basis), None).map_err(|e| e.to_string())?;
    DicyclicTernary::from_jternary(&s).map_err(|e| e.to_string())?.compare(&via)
}

fn unit_lemmas() -> Outcome {
    let mut tested = 0;
    for (name, _, _) in fixtures::FIXTURES {
        let Some(triplekit::io::Algebra::Dicyclic(a)) = fixtures::load::<Q>(name) else { continue };
        let (a0, _) = a.graded_bases();
        let Some(e) = a.find_unit(&a0) else { continue };
        let r = a.check_unit_lemmas(&e).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("{name}: {r:?}"))?;
        tested += 1;
    }
    ensure(tested > 0, || "no dicyclic fixture with a unit".into())
}

fn cli_contract() -> Outcome {
    let dir = tempfile::TempDir::new().map_err(|e| e.to_string())?;
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).map(|_| p)
    };
    let run = |args: &[&str]| Command::new(env!("CARGO_BIN_EXE_triplekit")).args(args).output().map(|o| o.status.code());
    let path = |p: &std::path::Path| p.to_string_lossy().into_owned();
    let good = write("b.json", fixtures::text("fkts-b").unwrap()).map_err(|e| e.to_string())?;
    let bad_text = fixtures::text("fkts-b").unwrap().replacen("\"1\"", "\"-1\"", 1);
    let bad = write("bad.json", &bad_text).map_err(|e| e.to_string())?;
    let broken = write("broken.json", &fixtures::text("osp").unwrap().replace("\"1\"", "\"1/0\"")).map_err(|e| e.to_string())?;
    for (file, want) in [(&good, 0), (&bad, 1), (&broken, 2)] {
        let got = run(&["verify", &path(file)]).map_err(|e| e.to_string())?;
        ensure(got == Some(want), || format!("{}: exit {got:?}, want {want}", file.display()))?;
    }
    for (name, target, unit) in [
        ("sp2", "g-jt", None),
        ("osp-jt", "g-jt", None),
        ("fkts-b", "g-u", None),
        ("osp", "g-u", None),
        ("dic-sp2", "g-a", Some("1,0,0")),
        ("sp2", "fkts-from-jt", None),
        ("fkts-b", "jt-from-fkts", None),
        ("sp2", "dic-from-jt", None),
        ("dic-sp2", "jt-from-dic", Some("1,0,0")),
        ("fkts-b", "dic-from-fkts", None),
    ] {
        let input = write(&format!("{name}.json"), fixtures::text(name).unwrap()).map_err(|e| e.to_string())?;
        let out = dir.path().join(format!("{name}-{target}.out.json"));
        let mut args = vec!["construct".to_string(), path(&input), "--target".into(), target.into(), "--out".into(), path(&out)];
        if let Some(u) = unit {
            args.extend(["--unit".to_string(), u.to_string()]);
        }
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        ensure(run(&argv).map_err(|e| e.to_string())? == Some(0), || format!("construct {name} {target}"))?;
        let text = std::fs::read_to_string(&out).map_err(|e| e.to_string())?;
        ensure(triplekit::cli::reparse_is_identity(&text), || format!("{name} {target}: write-read changed the file"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, u64); 9] = [
        ("axiom gates and +1 mutants", axiom_gates, 5),
        ("J-ternary axioms and operator identities", j_ternary_suite, 5),
        ("constructions are Lie (super)algebras", constructions_are_lie, 20),
        ("BC1 decomposition multiplicities", decomposition, 5),
        ("embedding of g(U) into g(J,U)", embedding, 5),
        ("Dic3 relations and eigenspaces", dicyclic_relations, 5),
        ("exact roundtrips", roundtrips, 10),
        ("unit element lemmas", unit_lemmas, 2),
        ("CLI exit codes and write-read idempotence", cli_contract, 5),
    ];
    let mut failed = 0;
    for (i, (what, f, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let took = start.elapsed();
        let slow = took > Duration::from_secs(*budget);
        match (&result, slow) {
            (Ok(()), false) => println!("criterion {}: pass  {what} ({:.2}s)", i + 1, took.as_secs_f64()),
            (Ok(()), true) => {
                failed += 1;
                println!("criterion {}: FAIL  {what}: {:.2}s over the {budget}s budget", i + 1, took.as_secs_f64());
            }
            (Err(msg), _) => {
                failed += 1;
                println!("criterion {}: FAIL  {what}: {msg}", i + 1);
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all 9 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 9 criteria fail");
        ExitCode::FAILURE
    }
}
