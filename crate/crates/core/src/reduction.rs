//! One step of complexity reduction: from `η` of degree 2 build
//! `0 -> M -> K -> ΩM -> 0` and compare Betti numbers and Poincaré series.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::complex::{complete_resolution, complete_resolution_unchecked, BettiTable, CompleteResolution};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::growth::{growth_report, Cx, GrowthReport, Poly, RationalSeries, Verdict, DEFAULT_GUARD};
use crate::linalg::{LinearSolver, Matrix, Subspace};
use crate::module::{GdimCertificate, GradedModule, ModuleMap};
use crate::operators::{eventual_injectivity, finite_generation_check, lift_and_decompose, InjectivityVerdict, OperatorSet};

/// One side of a Betti identity at index `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityResidual {
    pub n: i32,
    pub lhs: i64,
    pub rhs: i64,
    /// The `η` maps needed for the identity were verified injective (or
    /// surjective) at this index.
    pub guaranteed: bool,
}

impl IdentityResidual {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

#[derive(Clone, Debug)]
pub struct ReductionStep<F: PrimeField> {
    pub input: GradedModule<F>,
    pub coeffs: Vec<F>,
    pub injectivity: InjectivityVerdict<F>,
    /// Internal degree of `η`.
    pub degree: i32,
    pub n0: i32,
    pub k: GradedModule<F>,
    pub k_certificate: GdimCertificate,
    pub k_resolution: CompleteResolution<F>,
    pub betti_m: BettiTable,
    pub betti_k: BettiTable,
    /// `β_{n+1}(K) = β_{n+2}(M) - β_n(M)`.
    pub plus_identity: Vec<IdentityResidual>,
    /// `β_{-n}(K) = β_{-n}(M) - β_{2-n}(M)`.
    pub minus_identity: Vec<IdentityResidual>,
    /// Smallest `n_0` with `Ext^{n+2}(K,k)` generated from `Ext^n(K,k)`, and
    /// the same for `K*`; `None` if not observed.
    pub k_generation: Option<i32>,
    pub k_dual_generation: Option<i32>,
}

impl<F: PrimeField> ReductionStep<F> {
    pub fn identities_hold(&self) -> bool {
        self.plus_identity
            .iter()
            .chain(&self.minus_identity)
            .filter(|r| r.guaranteed)
            .all(IdentityResidual::holds)
    }
}

/// `η` on `Êxt^j(M,k) -> Êxt^{j+2}(M,k)` is the transpose of the constant
/// part of `η` at index `j + 2`; returns (rank, β_j, β_{j+2}).
fn tate_eta<F: PrimeField>(ops: &OperatorSet<F>, coeffs: &[F], j: i32) -> Option<(usize, usize, usize)> {
    let (lo, hi) = ops.complex().window();
    if j < lo || j + 2 > hi {
        return None;
    }
    let m = ops.combination(coeffs, j + 2).constant_part(ops.algebra());
    Some((m.rank(), m.rows(), m.cols()))
}

fn injective_at<F: PrimeField>(ops: &OperatorSet<F>, coeffs: &[F], j: i32) -> bool {
    tate_eta(ops, coeffs, j).is_some_and(|(r, b, _)| r == b)
}

fn surjective_at<F: PrimeField>(ops: &OperatorSet<F>, coeffs: &[F], j: i32) -> bool {
    tate_eta(ops, coeffs, j).is_some_and(|(r, _, b)| r == b)
}

/// Shared internal degree of the operators with nonzero coefficient.
fn eta_degree<F: PrimeField>(ops: &OperatorSet<F>, coeffs: &[F]) -> Result<i32> {
    let mut degrees = (0..ops.count()).filter(|&i| !coeffs[i].is_zero()).map(|i| -ops.shift(i));
    let d = degrees.next().ok_or_else(|| Error::Precondition("η is zero".into()))?;
    if degrees.any(|e| e != d) {
        return Err(Error::Precondition("η is not homogeneous: relations of different degrees".into()));
    }
    Ok(d)
}

/// The map `Ω²M -> M(-d)` given by `z = d_2 u ↦ π(η_2 u)`, with the
/// inclusion `Ω²M -> F_1`.
fn eta_map<F: PrimeField>(
    res: &CompleteResolution<F>,
    ops: &OperatorSet<F>,
    coeffs: &[F],
    d: i32,
) -> Result<(ModuleMap<F>, ModuleMap<F>)> {
    let c = &res.complex;
    let alg = c.algebra().clone();
    let (f0, f1, f2) = (c.module(0), c.module(1), c.module(2));
    let d2 = c.diff(2);
    let eta2 = ops.combination(coeffs, 2);
    let gens = res.plus.generators();
    let m = &res.module;

    let mut bases = BTreeMap::new();
    let mut images = BTreeMap::new();
    if let Some((lo, hi)) = f1.degree_bounds(&alg) {
        for e in lo..=hi {
            let mat = d2.degree_matrix(&alg, &f2, &f1, 0, e);
            let span = Subspace::spanned_by(mat.rows(), &mat.columns());
            bases.insert(e, Matrix::from_cols(mat.rows(), span.basis()));
            images.insert(e, mat);
        }
    }
    let (omega, inc) = GradedModule::free(alg.clone(), &f1).submodule(&bases)?;
    let target = m.twist(d);
    let mut components = BTreeMap::new();
    for e in omega.degrees() {
        let basis = &bases[&e];
        let solver = LinearSolver::new(&images[&e]);
        let eta = eta2.degree_matrix(&alg, &f2, &f0, -d, e);
        let proj = m.cover_matrix(gens, e - d).mul(&eta);
        let mut comp = Matrix::zeros(target.dim(e), basis.cols());
        for k in 0..basis.cols() {
            let u = solver
                .solve(&basis.column(k))
                .ok_or_else(|| Error::Fault(format!("syzygy element in degree {e} has no preimage under d_2")))?;
            for (r, v) in proj.mul_vec(&u).into_iter().enumerate() {
                comp[(r, k)] = v;
            }
        }
        components.insert(e, comp);
    }
    let f = ModuleMap::new(omega, target, 0, components);
    if !f.is_equivariant() {
        return Err(Error::Fault("the map induced by η is not A-linear".into()));
    }
    Ok((inc, f))
}

/// Builds `K` from `η = Σ c_i χ_i` (retrying generic coefficients if `coeffs`
/// is not injective on the tail), resolves it and records both Betti
/// identities.
pub fn build_extension<F: PrimeField>(
    res: &CompleteResolution<F>,
    ops: &OperatorSet<F>,
    coeffs: &[F],
    tail: usize,
    seed: u64,
) -> Result<ReductionStep<F>> {
    let steps = res.steps();
    let betti_m = res.minimal_betti();
    if res.free_summand || betti_m.plus().iter().skip(1).all(|&b| b == 0) {
        return Err(Error::Precondition("module has complexity 0; nothing to reduce".into()));
    }
    if coeffs.len() != ops.count() {
        return Err(Error::InvalidInput(format!("η needs {} coefficients, got {}", ops.count(), coeffs.len())));
    }
    let injectivity = eventual_injectivity(ops, coeffs, tail, seed);
    let Some(w) = injectivity.witness.clone() else {
        return Err(Error::Precondition("no η found acting injectively on Ext(M,k) and Ext(M*,k)".into()));
    };
    let degree = eta_degree(ops, &w)?;
    let (inc, f) = eta_map(res, ops, &w, degree)?;
    let k = GradedModule::pushout(&inc, &f)?;
    let k_certificate = k.gdim_zero_check(steps)?;
    if !k_certificate.passes() {
        return Err(Error::Fault(format!(
            "extension module is not totally reflexive: {}",
            k_certificate.failures().join(", ")
        )));
    }
    let k_resolution = complete_resolution_unchecked(&k, steps, k_certificate.clone())?;
    let betti_k = k_resolution.minimal_betti();

    let (lo, hi) = res.complex.window();
    let get = |t: &BettiTable, n: i32| t.get(n).map(|b| b as i64);
    let mut plus_identity = Vec::new();
    for n in 0..=hi - 2 {
        let (Some(lhs), Some(a), Some(b)) = (get(&betti_k, n + 1), get(&betti_m, n + 2), get(&betti_m, n)) else {
            continue;
        };
        plus_identity.push(IdentityResidual {
            n,
            lhs,
            rhs: a - b,
            guaranteed: injective_at(ops, &w, n) && injective_at(ops, &w, n + 1),
        });
    }
    let mut minus_identity = Vec::new();
    for n in 1..=-lo {
        let (Some(lhs), Some(a), Some(b)) = (get(&betti_k, -n), get(&betti_m, -n), get(&betti_m, 2 - n)) else {
            continue;
        };
        minus_identity.push(IdentityResidual {
            n,
            lhs,
            rhs: a - b,
            guaranteed: surjective_at(ops, &w, -n - 1) && surjective_at(ops, &w, -n),
        });
    }
    for r in plus_identity.iter().chain(&minus_identity) {
        if r.guaranteed && !r.holds() {
            return Err(Error::Fault(format!(
                "Betti identity fails at index {}: {} != {}",
                r.n, r.lhs, r.rhs
            )));
        }
    }

    // n_0: injective for n >= n_0 and surjective for n <= -n_0
    let pos = (0..=hi - 2).rev().take_while(|&n| injective_at(ops, &w, n)).last().unwrap_or(hi - 1);
    let neg = (lo..=0).take_while(|&n| surjective_at(ops, &w, n)).last().map_or(-lo + 1, |n| -n);
    let n0 = pos.max(neg);

    // a free K has Ext = 0, generated from the start
    let (k_generation, k_dual_generation) = if k_resolution.free_summand {
        (Some(0), Some(0))
    } else {
        let kc = &k_resolution.complex;
        let k_ops = lift_and_decompose(kc, &ops.ci)?;
        let kd_ops = lift_and_decompose(&kc.dualize(), &ops.ci)?;
        (finite_generation_check(&k_ops, tail), finite_generation_check(&kd_ops, tail))
    };

    Ok(ReductionStep {
        input: res.module.clone(),
        coeffs: w,
        injectivity,
        degree,
        n0,
        k,
        k_certificate,
        k_resolution,
        betti_m,
        betti_k,
        plus_identity,
        minus_identity,
        k_generation,
        k_dual_generation,
    })
}

/// Residuals of the two Poincaré relations and the pole orders they imply.
#[derive(Clone, Debug)]
pub struct PoincareVerdict {
    pub m: GrowthReport,
    pub k: GrowthReport,
    /// `(1 - t²) P⁺(M) - t P⁺(K)`.
    pub plus_residual: Option<RationalSeries>,
    /// `(1 - t²) P⁻(M) - P⁻(K)`.
    pub minus_residual: Option<RationalSeries>,
    pub plus_polynomial: Verdict,
    pub minus_polynomial: Verdict,
    pub plus_pole_drop: Verdict,
    pub minus_pole_drop: Verdict,
}

impl PoincareVerdict {
    /// `No` if any part fails, `Inconclusive` if a fit is missing.
    pub fn verdict(&self) -> Verdict {
        let parts = [
            self.plus_polynomial,
            self.minus_polynomial,
            self.plus_pole_drop,
            self.minus_pole_drop,
        ];
        if parts.contains(&Verdict::No) {
            Verdict::No
        } else if parts.contains(&Verdict::Inconclusive) {
            Verdict::Inconclusive
        } else {
            Verdict::Yes
        }
    }

    pub fn passes(&self) -> bool {
        [
            self.plus_polynomial,
            self.minus_polynomial,
            self.plus_pole_drop,
            self.minus_pole_drop,
        ]
        .iter()
        .all(|v| *v == Verdict::Yes)
    }
}

fn rational(cs: &[i64]) -> Poly<BigRational> {
    Poly::new(cs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
}

fn pole_drop(m: Option<usize>, k: Option<usize>) -> Verdict {
    match (m, k) {
        (Some(a), Some(b)) => Verdict::from_bool(a >= 1 && b + 1 == a),
        _ => Verdict::Inconclusive,
    }
}

pub fn verify_poincare_relation<F: PrimeField>(step: &ReductionStep<F>) -> PoincareVerdict {
    let m = growth_report(&step.betti_m, DEFAULT_GUARD);
    let k = growth_report(&step.betti_k, DEFAULT_GUARD);
    let one_minus_t2 = rational(&[1, 0, -1]);
    let residual = |a: Option<&RationalSeries>, b: Option<&RationalSeries>, q: &[i64]| match (a, b) {
        (Some(a), Some(b)) => Some(a.combine(&one_minus_t2, b, &rational(q))),
        _ => None,
    };
    let plus_residual = residual(m.poincare_plus(), k.poincare_plus(), &[0, -1]);
    let minus_residual = residual(m.poincare_minus(), k.poincare_minus(), &[-1]);
    let poly = |r: &Option<RationalSeries>| r.as_ref().map_or(Verdict::Inconclusive, |s| Verdict::from_bool(s.is_polynomial()));
    PoincareVerdict {
        plus_polynomial: poly(&plus_residual),
        minus_polynomial: poly(&minus_residual),
        plus_pole_drop: pole_drop(m.pole_order_plus, k.pole_order_plus),
        minus_pole_drop: pole_drop(m.pole_order_minus, k.pole_order_minus),
        plus_residual,
        minus_residual,
        m,
        k,
    }
}

/// Complexities observed on one rung of the ladder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rung {
    pub cx_plus: Cx,
    pub cx_minus: Cx,
    pub symmetric: Verdict,
    pub betti: BettiTable,
}

#[derive(Clone, Debug)]
pub struct Induction<F: PrimeField> {
    pub rungs: Vec<Rung>,
    pub steps: Vec<ReductionStep<F>>,
    pub poincare: Vec<PoincareVerdict>,
}

impl<F: PrimeField> Induction<F> {
    /// `cx⁺` along the ladder.
    pub fn ladder(&self) -> Vec<Cx> {
        self.rungs.iter().map(|r| r.cx_plus).collect()
    }
}

fn rung(table: BettiTable) -> Rung {
    let report = growth_report(&table, DEFAULT_GUARD);
    Rung {
        cx_plus: report.cx_plus.value,
        cx_minus: report.cx_minus.value,
        symmetric: report.symmetric,
        betti: table,
    }
}

/// Reduces `M` step by step until complexity 0. The number of steps may not
/// exceed the number of operators.
/// `eta` seeds the coefficient search at every rung; all ones by default.
pub fn full_induction<F: PrimeField>(
    m: &GradedModule<F>,
    steps: usize,
    tail: usize,
    seed: u64,
    eta: Option<&[F]>,
) -> Result<Induction<F>> {
    let alg = m.algebra().clone();
    let ci = alg
        .verify_ci()
        .ok_or_else(|| Error::Precondition("ring is not a certified complete intersection".into()))?;
    let mut res = complete_resolution(m, steps)?;
    let mut out = Induction {
        rungs: Vec::new(),
        steps: Vec::new(),
        poincare: Vec::new(),
    };
    loop {
        let r = rung(res.minimal_betti());
        let cx = r.cx_plus;
        out.rungs.push(r);
        match cx {
            Cx::Finite(0) => return Ok(out),
            Cx::Finite(_) => {}
            other => return Err(Error::Precondition(format!("complexity is {other}, not finite"))),
        }
        if out.steps.len() == ci.relations.len() {
            return Err(Error::Fault(format!(
                "complexity ladder is longer than the number of operators ({})",
                ci.relations.len()
            )));
        }
        let ops = lift_and_decompose(&res.complex, &ci)?;
        let ones = vec![F::one(); ops.count()];
        let step = build_extension(&res, &ops, eta.unwrap_or(&ones), tail, seed)?;
        out.poincare.push(verify_poincare_relation(&step));
        res = step.k_resolution.clone();
        out.steps.push(step);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{GradedAlgebra, Monomial, Polynomial};
    use crate::field::Fp;
    use num_traits::One;
    use std::sync::Arc;

    type F = Fp<32003>;

    fn ring(names: &[&str], rels: &[&[u32]]) -> Arc<GradedAlgebra<F>> {
        let relations = rels
            .iter()
            .map(|e| Polynomial::term(Monomial(e.to_vec()), F::new(1)))
            .collect();
        Arc::new(GradedAlgebra::new(names.iter().map(|s| s.to_string()).collect(), relations, None).unwrap())
    }

    fn step_for(a: &Arc<GradedAlgebra<F>>, steps: usize) -> ReductionStep<F> {
        let m = GradedModule::residue_field(a.clone());
        let res = complete_resolution(&m, steps).unwrap();
        let ops = lift_and_decompose(&res.complex, &a.verify_ci().unwrap()).unwrap();
        let ones = vec![F::one(); ops.count()];
        build_extension(&res, &ops, &ones, 4, 0).unwrap()
    }

    #[test]
    fn hypersurface_step_gives_free_module() {
        let a = ring(&["x"], &[&[2]]);
        let s = step_for(&a, 10);
        assert!(s.identities_hold());
        assert!(s.k_resolution.free_summand);
        assert!(s.betti_k.values.iter().all(|&b| b == 0));
        let p = verify_poincare_relation(&s);
        assert!(p.passes(), "{p:?}");
    }

    #[test]
    fn two_variable_step() {
        let a = ring(&["x", "y"], &[&[2, 0], &[0, 2]]);
        let s = step_for(&a, 10);
        assert!(s.identities_hold());
        for r in s.plus_identity.iter().filter(|r| r.guaranteed) {
            assert_eq!(r.lhs, 2);
        }
        assert!(s.plus_identity.iter().filter(|r| r.guaranteed).count() >= 4);
        assert!(s.minus_identity.iter().filter(|r| r.guaranteed).count() >= 4);
        assert!(verify_poincare_relation(&s).passes());
        assert!(s.k_generation.is_some() && s.k_dual_generation.is_some());
    }

    #[test]
    fn ladders() {
        let a = ring(&["x"], &[&[2]]);
        let ind = full_induction(&GradedModule::residue_field(a), 10, 4, 0, None).unwrap();
        assert_eq!(ind.ladder(), vec![Cx::Finite(1), Cx::Finite(0)]);
        let a = ring(&["x", "y"], &[&[2, 0], &[0, 2]]);
        let ind = full_induction(&GradedModule::residue_field(a.clone()), 10, 4, 0, None).unwrap();
        assert_eq!(ind.ladder(), vec![Cx::Finite(2), Cx::Finite(1), Cx::Finite(0)]);
        assert!(ind.rungs.iter().all(|r| r.symmetric == Verdict::Yes));
        let free = GradedModule::free(a, &crate::free::FreeModule::new(vec![0]));
        assert_eq!(full_induction(&free, 6, 4, 0, None).unwrap().steps.len(), 0);
    }
}
