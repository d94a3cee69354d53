//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use symgrowth::algebra::GradedAlgebra;
use symgrowth::cli::run::{build_module, build_ring};
use symgrowth::cli::{run, Command, JobSpec};
use symgrowth::complex::{complete_resolution, minimal_resolution, negative_betti_via_dual, FreeComplex};
use symgrowth::error::Error;
use symgrowth::fixtures::{fixture, standard_fixtures};
use symgrowth::growth::{complexity, growth_report, Cx, Verdict, DEFAULT_GUARD};
use symgrowth::module::GradedModule;
use symgrowth::operators::{
    duality_commutation_check, eventual_surjectivity_of_chainmap, lift_and_decompose, OperatorSet,
};
use symgrowth::reduction::{build_extension, full_induction, verify_poincare_relation};
use symgrowth::Gf32003 as F;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn load(name: &str) -> (Arc<GradedAlgebra<F>>, GradedModule<F>) {
    let job = fixture(name).expect("fixture").job;
    let alg = build_ring::<F>(&job.ring).expect("ring");
    let m = build_module(&alg, &job.module).expect("module");
    (alg, m)
}

fn operators(name: &str, steps: usize) -> Result<OperatorSet<F>, String> {
    let (alg, m) = load(name);
    let ci = alg.verify_ci().ok_or("not a complete intersection")?;
    let res = complete_resolution(&m, steps).map_err(|e| e.to_string())?;
    lift_and_decompose(&res.complex, &ci).map_err(|e| e.to_string())
}

/// `β` of the complex `... -x-> A -x-> A -x-> ...` over `k[x]/(x^2)`.
fn periodic_oracle(len: usize) -> Vec<usize> {
    vec![1; len]
}

/// Betti numbers of a tensor product of resolutions are the convolution of
/// the factors' Betti numbers.
fn convolve(a: &[usize], b: &[usize], len: usize) -> Vec<usize> {
    (0..len)
        .map(|n| (0..=n).filter(|&i| i < a.len() && n - i < b.len()).map(|i| a[i] * b[n - i]).sum())
        .collect()
}

fn series(s: Option<&symgrowth::growth::RationalSeries>) -> Option<(Vec<i64>, Vec<i64>)> {
    s.map(|s| (s.num_i64(), s.den_i64()))
}

fn c1_hypersurface() -> Outcome {
    let start = Instant::now();
    let (_, m) = load("r1");
    let res = complete_resolution(&m, 10).map_err(|e| e.to_string())?;
    let table = res.minimal_betti();
    let g = growth_report(&table, DEFAULT_GUARD);
    let elapsed = start.elapsed();
    let oracle = periodic_oracle(11);
    ensure(table.plus() == oracle, || format!("beta+ {:?}", table.plus()))?;
    ensure(table.minus() == oracle[1..], || format!("beta- {:?}", table.minus()))?;
    let geometric = Some((vec![1], vec![1, -1]));
    ensure(series(g.poincare_plus()) == geometric, || format!("P+ {:?}", series(g.poincare_plus())))?;
    ensure(series(g.poincare_minus()) == geometric, || format!("P- {:?}", series(g.poincare_minus())))?;
    ensure(g.cx_plus.value == Cx::Finite(1) && g.cx_minus.value == Cx::Finite(1), || "cx".into())?;
    ensure(g.symmetric == Verdict::Yes, || "not symmetric".into())?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("beta = 1 on [-10,10], P = 1/(1-t), {elapsed:.2?}"))
}

fn c2_ci_symmetric() -> Outcome {
    let start = Instant::now();
    let (_, m) = load("r2");
    let res = complete_resolution(&m, 10).map_err(|e| e.to_string())?;
    let table = res.minimal_betti();
    let g = growth_report(&table, DEFAULT_GUARD);
    let via_dual = negative_betti_via_dual(&m, 10).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let factor = periodic_oracle(11);
    let plus = convolve(&factor, &factor, 11);
    let minus: Vec<usize> = (1..=10).collect();
    ensure(table.plus() == plus, || format!("beta+ {:?}", table.plus()))?;
    ensure(table.minus() == minus, || format!("beta- {:?}", table.minus()))?;
    ensure(via_dual == table.minus(), || format!("dual path {via_dual:?}"))?;
    ensure(g.pole_order_plus == Some(2) && g.pole_order_minus == Some(2), || {
        format!("poles {:?} {:?}", g.pole_order_plus, g.pole_order_minus)
    })?;
    ensure(g.symmetric == Verdict::Yes, || "not symmetric".into())?;
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!("beta_n = n+1, beta_-n = n, poles 2/2, {elapsed:.2?}"))
}

fn c3_operators() -> Outcome {
    for name in ["r1", "r2", "r5"] {
        let ops = operators(name, 8)?;
        ensure(ops.decomposition_failure().is_none(), || format!("{name}: decomposition"))?;
        ensure(ops.chain_map_failure().is_none(), || format!("{name}: chain map"))?;
        for ((i, j), h) in ops.commutation_homotopies() {
            ensure(h.is_solved(), || format!("{name}: [t{i},t{j}] at {:?}", h.witness()))?;
        }
    }
    let pairs = operators("r2", 8)?.commutation_homotopies().len();
    ensure(pairs == 1, || format!("r2 has {pairs} commutators"))?;
    Ok("r1, r2, x^3".into())
}

fn c4_duality() -> Outcome {
    let mut identical = Vec::new();
    for name in ["r1", "r2", "r5"] {
        let ops = operators(name, 8)?;
        let v = duality_commutation_check(&ops).map_err(|e| e.to_string())?;
        ensure(v.passes, || format!("{name}: {:?}", v.witness))?;
        identical.push(format!("{name}:{}", if v.identical { "identical" } else { "homotopic" }));
    }
    Ok(identical.join(" "))
}

fn c5_linkage() -> Outcome {
    let ops = operators("r2", 10)?;
    let eta = [F::new(3), F::new(7)];
    let records = eventual_surjectivity_of_chainmap(&ops, &eta, 4);
    ensure(records.len() == 4, || format!("{} tail indices", records.len()))?;
    for r in &records {
        ensure(!r.ext_injective || r.surjective, || format!("n = {}: injective but not surjective", r.n))?;
    }
    ensure(records.iter().any(|r| r.ext_injective), || "no injective index in the tail".into())?;
    let ns: Vec<i32> = records.iter().map(|r| r.n).collect();
    Ok(format!("tail {ns:?}"))
}

fn c6_reduction() -> Outcome {
    let steps = 10;
    let (_, m) = load("r2");
    let ops = operators("r2", steps)?;
    let res = complete_resolution(&m, steps).map_err(|e| e.to_string())?;
    let step = build_extension(&res, &ops, &[F::new(1), F::new(1)], 4, 0).map_err(|e| e.to_string())?;
    let guaranteed: Vec<_> = step.plus_identity.iter().filter(|r| r.guaranteed).collect();
    ensure(!guaranteed.is_empty(), || "no guaranteed index".into())?;
    for r in &guaranteed {
        ensure(r.lhs == 2 && r.rhs == 2, || format!("n = {}: {} vs {}", r.n, r.lhs, r.rhs))?;
    }
    ensure(step.identities_hold(), || "negative identity".into())?;
    ensure(step.k_certificate.passes(), || format!("gdim(K): {:?}", step.k_certificate.failures()))?;
    let pv = verify_poincare_relation(&step);
    ensure(pv.passes(), || format!("Poincare relation: {:?}", pv.verdict()))?;

    let ind = full_induction(&m, steps, 4, 0, None).map_err(|e| e.to_string())?;
    ensure(ind.steps.len() == 2, || format!("ladder length {}", ind.steps.len()))?;
    let ladder = ind.ladder();
    ensure(ladder == [Cx::Finite(2), Cx::Finite(1), Cx::Finite(0)], || format!("ladder {ladder:?}"))?;
    for (i, rung) in ind.rungs.iter().enumerate() {
        ensure(rung.symmetric == Verdict::Yes, || format!("rung {i} not symmetric"))?;
    }
    for (i, p) in ind.poincare.iter().enumerate() {
        ensure(p.passes(), || format!("step {i} Poincare relation: {:?}", p.verdict()))?;
    }
    Ok(format!("{} guaranteed indices, ladder (2,1,0)", guaranteed.len()))
}

/// `ker x = im x` on `A`, degree by degree: then `A/(x)` has a periodic
/// resolution of rank one.
fn annihilator_is_principal(alg: &GradedAlgebra<F>) -> bool {
    let x = alg.elem_from_piece(1, &{
        let mut v = vec![F::new(0); alg.dim_at(1)];
        v[0] = F::new(1);
        v
    });
    (0..=alg.top() as i32).all(|d| {
        let into = alg.mul_matrix(&x, d, 1);
        let out = alg.mul_matrix(&x, d - 1, 1);
        let kernel = alg.dim_at(d) - into.rank();
        kernel == out.rank()
    })
}

fn c7_construction() -> Outcome {
    let (alg, m) = load("r4");
    ensure(annihilator_is_principal(&alg), || "oracle: ann(x) != (x)".into())?;
    ensure(alg.verify_ci().is_none(), || "R4 certified as a complete intersection".into())?;
    let res = complete_resolution(&m, 10).map_err(|e| e.to_string())?;
    let table = res.minimal_betti();
    ensure(table.plus()[..9] == [1; 9], || format!("beta+ {:?}", table.plus()))?;
    ensure(table.minus()[..8] == [1; 8], || format!("beta- {:?}", table.minus()))?;
    let g = growth_report(&table, DEFAULT_GUARD);
    ensure(g.symmetric == Verdict::Yes, || "not symmetric".into())?;
    Ok("beta = 1 on [-8,8], verify_ci = none".into())
}

fn c8_negative_control() -> Outcome {
    let (alg, m) = load("r3");
    let cert = m.gdim_zero_check(4).map_err(|e| e.to_string())?;
    ensure(!cert.reflexive, || "k reported reflexive".into())?;
    ensure(cert.ext_m.first().is_some_and(|&e| e != 0), || format!("Ext(k,A) {:?}", cert.ext_m))?;
    let betti = minimal_resolution(&m, 10).map_err(|e| e.to_string())?.betti();
    // m^2 = 0: every syzygy module is a direct sum of copies of k
    let edim = alg.dim_in_degree(1);
    let oracle: Vec<usize> = (0..=10u32).map(|n| edim.pow(n)).collect();
    ensure(betti == oracle, || format!("beta {betti:?}"))?;
    let cx = complexity(&betti, DEFAULT_GUARD);
    ensure(cx.value == Cx::Exponential, || format!("cx {}", cx.value))?;
    match complete_resolution(&m, 6) {
        Err(Error::NotTotallyReflexive(msg)) if msg.contains("reflexivity") && msg.contains("Ext^1(M,A)") => {
            Ok(format!("refused: {msg}"))
        }
        Err(e) => Err(format!("wrong diagnostic: {e}")),
        Ok(_) => Err("complete resolution was built".into()),
    }
}

fn exact(c: &FreeComplex<F>) -> Result<(), String> {
    ensure(c.d_squared_failure().is_none(), || format!("d^2 at {:?}", c.d_squared_failure()))?;
    let bad = c.exactness_failures();
    ensure(bad.is_empty(), || format!("not exact at {bad:?}"))
}

fn c9_exactness() -> Outcome {
    let mut checked = 0;
    for f in standard_fixtures() {
        let (_, m) = load(f.name);
        let name = f.name;
        if f.expect.gdim_zero {
            let res = complete_resolution(&m, 6).map_err(|e| format!("{name}: {e}"))?;
            exact(&res.complex).map_err(|e| format!("{name}: {e}"))?;
            exact(&res.complex.dualize()).map_err(|e| format!("{name} dual: {e}"))?;
            checked += 2;
        }
        let res = minimal_resolution(&m, 6).map_err(|e| format!("{name}: {e}"))?;
        let c = res.complex();
        ensure(c.d_squared_failure().is_none(), || format!("{name}: resolution d^2"))?;
        ensure(c.exactness_failures().is_empty(), || format!("{name}: resolution not exact"))?;
        checked += 1;
    }
    Ok(format!("{checked} complexes"))
}

fn c10_determinism() -> Outcome {
    let mut n = 0;
    for f in standard_fixtures() {
        for cmd in [Command::Symgrowth, Command::Complete, Command::Reduce] {
            let job = JobSpec { cmd, seed: 7, ..f.job.clone() };
            let a = run(&job).map(|r| r.to_json()).map_err(|e| e.to_string());
            let b = run(&job).map(|r| r.to_json()).map_err(|e| e.to_string());
            ensure(a == b, || format!("{} {}: outputs differ", f.name, cmd.name()))?;
            n += 1;
        }
    }
    Ok(format!("{n} jobs"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("hypersurface periodicity", c1_hypersurface),
        ("complete intersection symmetric growth", c2_ci_symmetric),
        ("operator construction", c3_operators),
        ("duality commutation", c4_duality),
        ("Ext injectivity implies chain map surjectivity", c5_linkage),
        ("reduction by an extension", c6_reduction),
        ("construction over a non-CI ring", c7_construction),
        ("negative control", c8_negative_control),
        ("exactness suite", c9_exactness),
        ("determinism", c10_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(info) => println!("PASS {:>2} {name}: {info}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
