//! Executes a job at the compiled prime matching its modulus.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};

use super::job::{Command, JobSpec, ModuleSpec, RawPoly, RingSpec};
use super::report::{cx_value, symmetric_value, Check, Report};
use crate::algebra::{GradedAlgebra, Monomial, Polynomial};
use crate::complex::{complete_resolution, complete_resolution_unchecked, minimal_resolution, negative_betti_via_dual, FreeComplex};
use crate::error::{Error, Result};
use crate::field::{Fp, PrimeField};
use crate::fixtures::construction_instance;
use crate::free::RingMatrix;
use crate::growth::{complexity, growth_report, Verdict, DEFAULT_GUARD};
use crate::module::GradedModule;
use crate::operators::{
    duality_commutation_check, eventual_injectivity, eventual_surjectivity_of_chainmap, finite_generation_check,
    lift_and_decompose, OperatorSet,
};
use crate::reduction::{full_induction, IdentityResidual};

/// Growth fits need `2 * guard + 4` terms on each side.
pub const MIN_FIT_STEPS: usize = 2 * DEFAULT_GUARD + 3;

/// Moduli with a compiled field type.
pub const SUPPORTED_PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 101, 32003, 65521];

pub fn run(job: &JobSpec) -> Result<Report> {
    match job.p {
        2 => run_at::<Fp<2>>(job),
        3 => run_at::<Fp<3>>(job),
        5 => run_at::<Fp<5>>(job),
        7 => run_at::<Fp<7>>(job),
        11 => run_at::<Fp<11>>(job),
        101 => run_at::<Fp<101>>(job),
        32003 => run_at::<Fp<32003>>(job),
        65521 => run_at::<Fp<65521>>(job),
        p => Err(Error::UnsupportedModulus(
            p,
            SUPPORTED_PRIMES.iter().map(u64::to_string).collect::<Vec<_>>().join(", "),
        )),
    }
}

fn poly<F: PrimeField>(raw: &RawPoly, n: usize) -> Polynomial<F> {
    let mut p = Polynomial::zero(n);
    for (e, c) in &raw.terms {
        p.add_term(Monomial(e.clone()), F::from_i64(*c as i64));
    }
    p
}

pub fn build_ring<F: PrimeField>(spec: &RingSpec) -> Result<Arc<GradedAlgebra<F>>> {
    let n = spec.vars.len();
    let rels = spec.rels.iter().map(|r| poly(r, n)).collect();
    Ok(Arc::new(GradedAlgebra::new(spec.vars.clone(), rels, None)?))
}

pub fn build_module<F: PrimeField>(alg: &Arc<GradedAlgebra<F>>, spec: &ModuleSpec) -> Result<GradedModule<F>> {
    let n = alg.nvars();
    let entries: Vec<Vec<Polynomial<F>>> = spec.entries.iter().map(|r| r.iter().map(|e| poly(e, n)).collect()).collect();
    GradedModule::from_presentation(alg.clone(), spec.rows.clone(), spec.cols.clone(), &entries)
}

fn eta<F: PrimeField>(job: &JobSpec, count: usize) -> Result<Vec<F>> {
    match &job.eta {
        None => Ok(vec![F::one(); count]),
        Some(v) if v.len() == count => Ok(v.iter().map(|&c| F::from_i64(c)).collect()),
        Some(v) => Err(Error::InvalidInput(format!("eta has {} coefficients, the ring has {count} relations", v.len()))),
    }
}

fn field_vec<F: PrimeField>(v: &[F]) -> Value {
    json!(v.iter().map(|c| c.signed()).collect::<Vec<_>>())
}

fn matrix_json<F: PrimeField>(alg: &GradedAlgebra<F>, m: &RingMatrix<F>) -> Value {
    json!(m.format(alg))
}

fn opt_index(w: Option<i32>) -> Value {
    w.map_or(Value::Null, |n| json!(n))
}

fn complex_checks<F: PrimeField>(c: &FreeComplex<F>, prefix: &str, out: &mut Vec<Check>) {
    let sq = c.d_squared_failure();
    out.push(Check::bool(format!("{prefix}d_squared_zero"), sq.is_none(), opt_index(sq)));
    let ex = c.exactness_failures();
    out.push(Check::bool(format!("{prefix}exact"), ex.is_empty(), if ex.is_empty() { Value::Null } else { json!(ex) }));
}

pub fn run_at<F: PrimeField>(job: &JobSpec) -> Result<Report> {
    let alg = build_ring::<F>(&job.ring)?;
    let m = build_module(&alg, &job.module)?;
    let steps = match job.cmd {
        Command::Resolve | Command::Complete | Command::Gdim | Command::Operators | Command::DualityCheck => job.steps.max(1),
        _ => job.steps.max(MIN_FIT_STEPS),
    };
    let job = &JobSpec { steps, ..job.clone() };
    let mut r = Report::new(job.cmd.name());
    r.detail("modulus", json!(job.p));
    r.detail("steps", json!(steps));
    match job.cmd {
        Command::Resolve => {
            let res = minimal_resolution(&m, steps)?;
            let c = res.complex();
            r.betti_plus = Some(res.betti());
            complex_checks(c, "", &mut r.checks);
            r.checks.push(Check::bool("minimal", c.is_minimal(), Value::Null));
            let diffs: BTreeMap<String, Value> = (1..=steps as i32)
                .map(|n| (n.to_string(), matrix_json(&alg, &c.diff(n))))
                .collect();
            r.detail("differentials", json!(diffs));
        }
        Command::Complete => {
            let cr = complete_resolution(&m, steps)?;
            let table = cr.betti();
            r.set_betti(&table, true);
            complex_checks(&cr.complex, "", &mut r.checks);
            let ta = cr.total_acyclicity_failures();
            r.checks.push(Check::bool("dual_exact", ta.is_empty(), if ta.is_empty() { Value::Null } else { json!(ta) }));
            r.checks.push(Check::bool("splice_image", cr.splice_image_matches(), Value::Null));
            let via_dual = negative_betti_via_dual(&m, steps)?;
            r.checks.push(Check::bool("negative_paths_agree", via_dual == table.minus(), json!(via_dual)));
            r.detail("free_summand", json!(cr.free_summand));
            let diffs: BTreeMap<String, Value> = (-(steps as i32) + 1..=steps as i32)
                .map(|n| (n.to_string(), matrix_json(&alg, &cr.complex.diff(n))))
                .collect();
            r.detail("differentials", json!(diffs));
        }
        Command::Betti | Command::Poincare | Command::Cx | Command::Symgrowth => growth(&m, job, &mut r)?,
        Command::Gdim => {
            let cert = m.gdim_zero_check(steps)?;
            let first = |v: &[usize]| v.iter().position(|&e| e != 0).map_or(Value::Null, |i| json!(i + 1));
            r.checks.push(Check::bool("reflexive", cert.reflexive, Value::Null));
            r.checks.push(Check::bool("ext_m_vanishes", cert.ext_m_vanishes, first(&cert.ext_m)));
            r.checks.push(Check::bool("ext_mdual_vanishes", cert.ext_mdual_vanishes, first(&cert.ext_mdual)));
            r.checks.push(Check::bool("gdim_zero", cert.passes(), json!(cert.failures())));
            r.detail("ext_m", json!(cert.ext_m));
            r.detail("ext_mdual", json!(cert.ext_mdual));
        }
        Command::Operators => {
            let ops = operators(&m, steps)?;
            let coeffs = eta::<F>(job, ops.count())?;
            operator_checks(&ops, &coeffs, job, &mut r);
            let mats: BTreeMap<String, BTreeMap<String, Value>> = (0..ops.count())
                .map(|i| {
                    let per: BTreeMap<String, Value> =
                        ops.ops[i].iter().map(|(n, t)| (n.to_string(), matrix_json(&alg, t))).collect();
                    (format!("t{}", i + 1), per)
                })
                .collect();
            r.detail("operators", json!(mats));
        }
        Command::DualityCheck => {
            let ops = operators(&m, steps)?;
            let v = duality_commutation_check(&ops)?;
            for (i, w) in v.witness.iter().enumerate() {
                r.checks.push(Check::bool(format!("duality_commutation_t{}", i + 1), w.is_none(), opt_index(*w)));
            }
            r.detail("identical", json!(v.identical));
        }
        Command::Reduce => reduce(&m, job, &mut r)?,
        Command::Construct => {
            let a2 = build_ring::<F>(job.extend.as_ref().expect("checked by the parser"))?;
            let c = construction_instance(&m, &a2, steps)?;
            r.checks.push(Check::bool("betti_preserved", c.betti_preserved, json!(c.betti)));
            r.checks.push(Check::bool("dual_compatible", c.dual_compatible, Value::Null));
            r.detail("ci", json!(c.algebra.verify_ci().is_some()));
            r.detail("vars", json!(c.algebra.names()));
            growth(&c.module, job, &mut r)?;
        }
    }
    Ok(r)
}

fn operators<F: PrimeField>(m: &GradedModule<F>, steps: usize) -> Result<OperatorSet<F>> {
    let ci = m
        .algebra()
        .verify_ci()
        .ok_or_else(|| Error::Precondition("ring is not a certified complete intersection".into()))?;
    let cr = complete_resolution(m, steps)?;
    lift_and_decompose(&cr.complex, &ci)
}

fn operator_checks<F: PrimeField>(ops: &OperatorSet<F>, coeffs: &[F], job: &JobSpec, r: &mut Report) {
    let w = ops.decomposition_failure();
    r.checks.push(Check::bool("decomposition", w.is_none(), opt_index(w)));
    let w = ops.chain_map_failure();
    r.checks.push(Check::bool("chain_map", w.is_none(), opt_index(w)));
    for ((a, b), h) in ops.commutation_homotopies() {
        r.checks.push(Check::bool(format!("commute_t{}_t{}", a + 1, b + 1), h.is_solved(), opt_index(h.witness())));
    }
    let inj = eventual_injectivity(ops, coeffs, job.tail, job.seed);
    let witness = match &inj.witness {
        Some(cs) => json!({
            "coeffs": field_vec(cs),
            "attempt": inj.attempt,
            "first_injective": inj.first_injective,
            "first_injective_dual": inj.first_injective_dual,
        }),
        None => Value::Null,
    };
    r.checks.push(Check::bool("eventual_injectivity", inj.found(), witness));
    if let Some(cs) = &inj.witness {
        let recs = eventual_surjectivity_of_chainmap(ops, cs, job.tail);
        let bad: Vec<i32> = recs.iter().filter(|x| x.ext_injective && !x.surjective).map(|x| x.n).collect();
        r.checks.push(Check::bool("injective_implies_surjective", bad.is_empty(), json!(bad)));
        let surj: Vec<i32> = recs.iter().filter(|x| x.surjective).map(|x| x.n).collect();
        r.detail("surjective_indices", json!(surj));
    }
    let n0 = finite_generation_check(ops, job.tail);
    r.checks.push(Check::bool("finite_generation", n0.is_some(), opt_index(n0)));
}

fn growth<F: PrimeField>(m: &GradedModule<F>, job: &JobSpec, r: &mut Report) -> Result<()> {
    let steps = job.steps;
    let cert = m.gdim_zero_check(steps)?;
    let cmd = job.cmd;
    let want_series = !matches!(cmd, Command::Betti);
    let want_cx = matches!(cmd, Command::Cx | Command::Symgrowth | Command::Construct);
    let want_sym = matches!(cmd, Command::Symgrowth | Command::Construct);
    r.checks.push(Check::bool("gdim_zero", cert.passes(), json!(cert.failures())));
    if cert.passes() {
        let cr = complete_resolution_unchecked(m, steps, cert)?;
        let table = cr.betti();
        r.set_betti(&table, true);
        let g = growth_report(&table, DEFAULT_GUARD);
        if want_series {
            r.set_series(&g, true);
        }
        if want_cx {
            r.set_cx(&g, true);
        }
        if want_sym {
            r.symmetric = Some(symmetric_value(g.symmetric));
            // cx± of M and of M* all agree
            let dual = cr.dual.module.clone();
            let gd = growth_report(&complete_resolution(&dual, steps)?.betti(), DEFAULT_GUARD);
            let all = [&g.cx_plus, &g.cx_minus, &gd.cx_plus, &gd.cx_minus];
            let verdict = if all.iter().all(|c| c.is_exact()) {
                Verdict::from_bool(all.iter().all(|c| c.value == g.cx_plus.value))
            } else {
                Verdict::Inconclusive
            };
            let values: Vec<Value> = all.iter().map(|c| cx_value(c.value)).collect();
            r.checks.push(Check::new("four_way_equality", verdict, json!(values)));
        }
        r.detail("free_summand", json!(cr.free_summand));
    } else {
        // no complete resolution: the positive side only
        let plus = minimal_resolution(m, steps)?.betti();
        r.betti_plus = Some(plus.clone());
        let c = complexity(&plus, DEFAULT_GUARD);
        if want_series {
            r.poincare_plus = c.series.as_ref().map(Into::into);
        }
        if want_cx {
            r.cx_plus = Some(cx_value(c.value));
            r.detail("cx_plus_heuristic", json!(c.heuristic));
        }
        if want_sym {
            r.symmetric = Some(symmetric_value(Verdict::Inconclusive));
        }
    }
    Ok(())
}

fn residuals(v: &[IdentityResidual]) -> Value {
    json!(v
        .iter()
        .map(|x| json!({"n": x.n, "lhs": x.lhs, "rhs": x.rhs, "guaranteed": x.guaranteed}))
        .collect::<Vec<_>>())
}

fn reduce<F: PrimeField>(m: &GradedModule<F>, job: &JobSpec, r: &mut Report) -> Result<()> {
    let steps = job.steps;
    let count = m.algebra().relations().len();
    let coeffs = eta::<F>(job, count)?;
    let ind = full_induction(m, steps, job.tail, job.seed, Some(&coeffs))?;
    let first = &ind.rungs[0];
    r.set_betti(&first.betti, true);
    r.set_series(&growth_report(&first.betti, DEFAULT_GUARD), true);
    r.cx_plus = Some(cx_value(first.cx_plus));
    r.cx_minus = Some(cx_value(first.cx_minus));
    r.symmetric = Some(symmetric_value(first.symmetric));
    for (i, rung) in ind.rungs.iter().enumerate() {
        r.checks.push(Check::new(format!("rung{i}_symmetric"), rung.symmetric, Value::Null));
    }
    for (i, (s, p)) in ind.steps.iter().zip(&ind.poincare).enumerate() {
        let bad: Vec<i32> = s
            .plus_identity
            .iter()
            .chain(&s.minus_identity)
            .filter(|x| x.guaranteed && !x.holds())
            .map(|x| x.n)
            .collect();
        r.checks.push(Check::bool(format!("step{i}_betti_identities"), s.identities_hold(), json!(bad)));
        r.checks.push(Check::bool(format!("step{i}_k_gdim_zero"), s.k_certificate.passes(), Value::Null));
        r.checks.push(Check::bool(
            format!("step{i}_k_generation"),
            s.k_generation.is_some() && s.k_dual_generation.is_some(),
            json!([s.k_generation, s.k_dual_generation]),
        ));
        r.checks.push(Check::new(format!("step{i}_poincare_relation"), p.verdict(), Value::Null));
    }
    let expected = match first.cx_plus {
        crate::growth::Cx::Finite(c) => c,
        _ => usize::MAX,
    };
    r.checks.push(Check::bool("ladder_length", ind.steps.len() == expected, json!(ind.steps.len())));
    let ladder: Vec<Value> = ind
        .rungs
        .iter()
        .map(|x| {
            json!({
                "cx_plus": cx_value(x.cx_plus),
                "cx_minus": cx_value(x.cx_minus),
                "symmetric": symmetric_value(x.symmetric),
                "betti_plus": x.betti.plus(),
                "betti_minus": x.betti.minus(),
            })
        })
        .collect();
    r.detail("ladder", json!(ladder));
    let steps_json: Vec<Value> = ind
        .steps
        .iter()
        .zip(&ind.poincare)
        .map(|(s, p)| {
            json!({
                "eta": field_vec(&s.coeffs),
                "n0": s.n0,
                "plus_identity": residuals(&s.plus_identity),
                "minus_identity": residuals(&s.minus_identity),
                "poincare_plus_residual": p.plus_residual.as_ref().map(|x| x.to_string()),
                "poincare_minus_residual": p.minus_residual.as_ref().map(|x| x.to_string()),
            })
        })
        .collect();
    r.detail("steps", json!(steps_json));
    Ok(())
}
