//! Free complexes over a [`GradedAlgebra`]: minimal resolutions, complete
//! resolutions by splicing with the dual of a resolution of `M*`, and the
//! Betti data read off them.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::GradedAlgebra;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::free::{FreeModule, RingMatrix};
use crate::linalg::{Matrix, Subspace};
use crate::module::{Dual, GdimCertificate, Generators, GradedModule};

/// Largest Betti number a resolution may reach before it is aborted.
pub const GROWTH_LIMIT: usize = 10_000;

/// `C_lo <- ... <- C_hi` with `d_n : C_n -> C_{n-1}` of internal degree 0.
#[derive(Clone, Debug)]
pub struct FreeComplex<F: PrimeField> {
    algebra: Arc<GradedAlgebra<F>>,
    lo: i32,
    hi: i32,
    modules: BTreeMap<i32, FreeModule>,
    diffs: BTreeMap<i32, RingMatrix<F>>,
}

impl<F: PrimeField> PartialEq for FreeComplex<F> {
    fn eq(&self, other: &Self) -> bool {
        (self.lo, self.hi) == (other.lo, other.hi) && self.modules == other.modules && self.diffs == other.diffs
    }
}

impl<F: PrimeField> FreeComplex<F> {
    /// `modules[k]` is `C_{lo + k}`; `diffs` maps `n` to `d_n`.
    pub fn new(
        algebra: Arc<GradedAlgebra<F>>,
        lo: i32,
        modules: Vec<FreeModule>,
        diffs: BTreeMap<i32, RingMatrix<F>>,
    ) -> Result<Self> {
        if modules.is_empty() {
            return Err(Error::InvalidInput("a complex needs at least one module".into()));
        }
        let hi = lo + modules.len() as i32 - 1;
        let modules: BTreeMap<i32, FreeModule> = modules.into_iter().enumerate().map(|(k, m)| (lo + k as i32, m)).collect();
        for (&n, d) in &diffs {
            if n <= lo || n > hi {
                return Err(Error::InvalidInput(format!("differential d_{n} outside the window [{lo}, {hi}]")));
            }
            if d.cols() != modules[&n].rank() || d.rows() != modules[&(n - 1)].rank() {
                return Err(Error::InvalidInput(format!("differential d_{n} has the wrong shape")));
            }
            if !d.is_homogeneous(&algebra, &modules[&n], &modules[&(n - 1)], 0) {
                return Err(Error::NotHomogeneous(format!("differential d_{n} is not of internal degree 0")));
            }
        }
        Ok(FreeComplex {
            algebra,
            lo,
            hi,
            modules,
            diffs,
        })
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra<F>> {
        &self.algebra
    }

    pub fn window(&self) -> (i32, i32) {
        (self.lo, self.hi)
    }

    pub fn module(&self, n: i32) -> FreeModule {
        self.modules.get(&n).cloned().unwrap_or_default()
    }

    pub fn rank(&self, n: i32) -> usize {
        self.modules.get(&n).map_or(0, FreeModule::rank)
    }

    pub fn diff(&self, n: i32) -> RingMatrix<F> {
        self.diffs
            .get(&n)
            .cloned()
            .unwrap_or_else(|| RingMatrix::zeros(&self.algebra, self.rank(n - 1), self.rank(n)))
    }

    /// Both neighbours of `C_n` lie in the window.
    pub fn is_interior(&self, n: i32) -> bool {
        self.lo < n && n < self.hi
    }

    pub fn interior(&self) -> std::ops::Range<i32> {
        self.lo + 1..self.hi
    }

    pub fn is_minimal_at(&self, n: i32) -> bool {
        self.diff(n).is_minimal(&self.algebra)
    }

    pub fn is_minimal(&self) -> bool {
        (self.lo + 1..=self.hi).all(|n| self.is_minimal_at(n))
    }

    /// The `k`-matrix of `d_n` from degree `d` of `C_n`.
    pub fn diff_in_degree(&self, n: i32, d: i32) -> Matrix<F> {
        self.diff(n).degree_matrix(&self.algebra, &self.module(n), &self.module(n - 1), 0, d)
    }

    /// First `n` with `d_{n-1} d_n != 0`, if any.
    pub fn d_squared_failure(&self) -> Option<i32> {
        (self.lo + 2..=self.hi).find(|&n| !self.diff(n - 1).mul(&self.algebra, &self.diff(n)).is_zero())
    }

    /// `rank d_n + rank d_{n+1} = dim C_n` in every internal degree.
    pub fn is_exact_at(&self, n: i32) -> bool {
        let c = self.module(n);
        let Some((lo, hi)) = c.degree_bounds(&self.algebra) else {
            return true;
        };
        (lo..=hi).all(|d| {
            let out = self.diff_in_degree(n, d).rank();
            let inc = self.diff_in_degree(n + 1, d).rank();
            out + inc == c.piece_dim(&self.algebra, d)
        })
    }

    /// Interior indices where exactness fails.
    pub fn exactness_failures(&self) -> Vec<i32> {
        self.interior().filter(|&n| !self.is_exact_at(n)).collect()
    }

    /// `Hom(C, A)` indexed by `Hom(C, A)_m = (C_{-m})*`, with differential
    /// `(d_{1-m})^T`.
    pub fn dualize(&self) -> FreeComplex<F> {
        let lo = -self.hi;
        let hi = -self.lo;
        let modules = (lo..=hi).map(|m| self.module(-m).dual()).collect();
        let diffs = (lo + 1..=hi)
            .filter_map(|m| self.diffs.get(&(1 - m)).map(|d| (m, d.transpose())))
            .collect();
        FreeComplex::new(self.algebra.clone(), lo, modules, diffs).expect("dual of a valid complex")
    }

    /// Ranks over the window.
    pub fn betti(&self) -> BettiTable {
        BettiTable {
            lo: self.lo,
            values: (self.lo..=self.hi).map(|n| self.rank(n)).collect(),
        }
    }

    /// `dim Êxt^n(M, k)`: homology of `Hom(C, k)` at `Hom(C_n, k)`.
    pub fn tate_ext_dims(&self) -> BTreeMap<i32, usize> {
        (self.lo..=self.hi)
            .map(|n| {
                let r_out = self.diff(n + 1).constant_part(&self.algebra).rank();
                let r_in = self.diff(n).constant_part(&self.algebra).rank();
                (n, self.rank(n) - r_out - r_in)
            })
            .collect()
    }
}

/// Betti numbers over a window of indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub lo: i32,
    pub values: Vec<usize>,
}

impl BettiTable {
    pub fn hi(&self) -> i32 {
        self.lo + self.values.len() as i32 - 1
    }

    pub fn get(&self, n: i32) -> Option<usize> {
        if n < self.lo {
            return None;
        }
        self.values.get((n - self.lo) as usize).copied()
    }

    /// `β_0, β_1, ...` up to the window edge.
    pub fn plus(&self) -> Vec<usize> {
        (0..=self.hi()).filter_map(|n| self.get(n)).collect()
    }

    /// `β_{-1}, β_{-2}, ...` down to the window edge.
    pub fn minus(&self) -> Vec<usize> {
        (self.lo..=-1).rev().filter_map(|n| self.get(n)).collect()
    }
}

/// A minimal free resolution `F_0 <- F_1 <- ... <- F_steps` with its
/// augmentation generators.
#[derive(Clone, Debug)]
pub struct Resolution<F: PrimeField> {
    complex: FreeComplex<F>,
    generators: Generators<F>,
}

impl<F: PrimeField> Resolution<F> {
    pub fn complex(&self) -> &FreeComplex<F> {
        &self.complex
    }

    pub fn generators(&self) -> &Generators<F> {
        &self.generators
    }

    pub fn betti(&self) -> Vec<usize> {
        self.complex.betti().values
    }

    pub fn into_complex(self) -> FreeComplex<F> {
        self.complex
    }
}

/// Minimal generators of the submodule of `ambient` spanned in each degree
/// by the columns of `sub[d]`.
fn submodule_generators<F: PrimeField>(
    alg: &GradedAlgebra<F>,
    ambient: &FreeModule,
    sub: &BTreeMap<i32, Matrix<F>>,
) -> (Vec<i32>, Vec<Vec<F>>) {
    let mut twists = Vec::new();
    let mut vectors = Vec::new();
    for (&d, basis) in sub {
        if basis.cols() == 0 {
            continue;
        }
        let mut span = Subspace::new(ambient.piece_dim(alg, d));
        if let Some(prev) = sub.get(&(d - 1)) {
            for i in 0..alg.nvars() {
                let act = ambient.var_action(alg, i, d - 1);
                for col in act.mul(prev).columns() {
                    span.insert(&col);
                }
            }
        }
        for col in basis.columns() {
            if span.insert(&col) {
                twists.push(d);
                vectors.push(col);
            }
        }
    }
    (twists, vectors)
}

/// Kernel of `d : source -> target` in every degree of `source`.
fn kernel_by_degree<F: PrimeField>(
    alg: &GradedAlgebra<F>,
    d: &RingMatrix<F>,
    source: &FreeModule,
    target: &FreeModule,
) -> BTreeMap<i32, Matrix<F>> {
    let Some((lo, hi)) = source.degree_bounds(alg) else {
        return BTreeMap::new();
    };
    (lo..=hi)
        .map(|deg| (deg, d.degree_matrix(alg, source, target, 0, deg).kernel_basis()))
        .collect()
}

/// Minimal free resolution of `M` through `F_steps`.
pub fn minimal_resolution<F: PrimeField>(m: &GradedModule<F>, steps: usize) -> Result<Resolution<F>> {
    let alg = m.algebra().clone();
    let gens = m.minimal_generators();
    if gens.twists.len() > GROWTH_LIMIT {
        return Err(Error::GrowthLimit {
            index: 0,
            rank: gens.twists.len(),
        });
    }
    let f0 = FreeModule::new(gens.twists.clone());
    let mut kernel: BTreeMap<i32, Matrix<F>> = match f0.degree_bounds(&alg) {
        Some((lo, hi)) => (lo..=hi).map(|d| (d, m.cover_matrix(&gens, d).kernel_basis())).collect(),
        None => BTreeMap::new(),
    };
    let mut modules = vec![f0];
    let mut diffs = BTreeMap::new();
    for n in 1..=steps {
        let cur = modules.last().expect("nonempty");
        let (twists, vectors) = submodule_generators(&alg, cur, &kernel);
        if twists.len() > GROWTH_LIMIT {
            return Err(Error::GrowthLimit {
                index: n as i32,
                rank: twists.len(),
            });
        }
        let next = FreeModule::new(twists);
        let cols = next
            .twists
            .iter()
            .zip(&vectors)
            .map(|(&e, v)| cur.vector_to_column(&alg, e, v))
            .collect();
        let d = RingMatrix::from_columns(&alg, cur.rank(), cols);
        kernel = kernel_by_degree(&alg, &d, &next, cur);
        diffs.insert(n as i32, d);
        modules.push(next);
    }
    let complex = FreeComplex::new(alg, 0, modules, diffs)?;
    Ok(Resolution {
        complex,
        generators: gens,
    })
}

/// A complete resolution over `[-steps, steps]` together with the pieces it
/// was spliced from.
#[derive(Clone, Debug)]
pub struct CompleteResolution<F: PrimeField> {
    pub complex: FreeComplex<F>,
    pub module: GradedModule<F>,
    pub dual: Dual<F>,
    pub plus: Resolution<F>,
    pub minus: Resolution<F>,
    pub certificate: GdimCertificate,
    /// `d_0` has a unit entry, i.e. `M` has a nonzero free summand.
    pub free_summand: bool,
}

impl<F: PrimeField> CompleteResolution<F> {
    pub fn steps(&self) -> usize {
        self.complex.hi as usize
    }

    pub fn betti(&self) -> BettiTable {
        self.complex.betti()
    }

    /// Ranks of the minimal complete resolution. Only `d_0` can fail to be
    /// minimal, so indices `0` and `-1` are replaced by Tate Ext dimensions
    /// when `M` has a free summand.
    pub fn minimal_betti(&self) -> BettiTable {
        let mut table = self.betti();
        if self.free_summand {
            let tate = self.complex.tate_ext_dims();
            for n in [-1, 0] {
                if self.complex.is_interior(n) {
                    if let Some(slot) = table.values.get_mut((n - table.lo) as usize) {
                        *slot = tate[&n];
                    }
                }
            }
        }
        table
    }

    /// `im d_0` has the Hilbert function of `M`.
    pub fn splice_image_matches(&self) -> bool {
        let c0 = self.complex.module(0);
        let alg = &self.complex.algebra;
        let Some((lo, hi)) = c0.degree_bounds(alg) else {
            return self.module.is_zero();
        };
        let lo = lo.min(self.module.lo());
        let hi = hi.max(self.module.hi());
        (lo..=hi).all(|d| self.complex.diff_in_degree(0, d).rank() == self.module.dim(d))
    }

    /// Interior indices where `Hom(C, A)` fails to be exact.
    pub fn total_acyclicity_failures(&self) -> Vec<i32> {
        self.complex.dualize().exactness_failures()
    }
}

/// Splices the minimal resolution of `M` with the dual of the minimal
/// resolution of `M*`, after certifying G-dimension zero on a window of
/// `steps` Ext indices.
pub fn complete_resolution<F: PrimeField>(m: &GradedModule<F>, steps: usize) -> Result<CompleteResolution<F>> {
    let certificate = m.gdim_zero_check(steps.max(1))?;
    if !certificate.passes() {
        return Err(Error::NotTotallyReflexive(certificate.failures().join(", ")));
    }
    complete_resolution_unchecked(m, steps, certificate)
}

/// The splice without re-running the G-dimension check.
pub fn complete_resolution_unchecked<F: PrimeField>(
    m: &GradedModule<F>,
    steps: usize,
    certificate: GdimCertificate,
) -> Result<CompleteResolution<F>> {
    let alg = m.algebra().clone();
    let dual = m.dual();
    let plus = minimal_resolution(m, steps)?;
    let minus = minimal_resolution(&dual.module, steps.saturating_sub(1))?;
    let steps = steps as i32;

    let g0 = plus.generators();
    let h0 = minus.generators();
    // d_0[j][i] = φ_j(g_i)
    let mut d0 = RingMatrix::zeros(&alg, h0.twists.len(), g0.twists.len());
    for (j, (&s, phi)) in h0.twists.iter().zip(&h0.vectors).enumerate() {
        for (i, (&e, g)) in g0.twists.iter().zip(&g0.vectors).enumerate() {
            let v = dual.eval(s, phi, e, g);
            *d0.get_mut(j, i) = alg.elem_from_piece(e + s, &v);
        }
    }
    let free_summand = !d0.is_minimal(&alg);

    let mut modules = Vec::new();
    for n in -steps..=steps {
        if n >= 0 {
            modules.push(plus.complex().module(n));
        } else {
            modules.push(minus.complex().module(-n - 1).dual());
        }
    }
    let mut diffs = BTreeMap::new();
    for n in -steps + 1..=steps {
        let d = match n {
            0 => d0.clone(),
            n if n > 0 => plus.complex().diff(n),
            n => minus.complex().diff(-n).transpose(),
        };
        diffs.insert(n, d);
    }
    let complex = FreeComplex::new(alg, -steps, modules, diffs)?;
    Ok(CompleteResolution {
        complex,
        module: m.clone(),
        dual,
        plus,
        minus,
        certificate,
        free_summand,
    })
}

/// `β_{-(n+1)}(M) = β_n(M*)`, read from a resolution of `M*`; returns
/// `β_{-1}, ..., β_{-steps}`.
pub fn negative_betti_via_dual<F: PrimeField>(m: &GradedModule<F>, steps: usize) -> Result<Vec<usize>> {
    if steps == 0 {
        return Ok(Vec::new());
    }
    Ok(minimal_resolution(&m.dual().module, steps - 1)?.betti())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Monomial, Polynomial};
    use crate::field::Fp;

    type F = Fp<32003>;

    fn ring(names: &[&str], rels: &[&[u32]]) -> Arc<GradedAlgebra<F>> {
        let relations = rels
            .iter()
            .map(|e| Polynomial::term(Monomial(e.to_vec()), F::new(1)))
            .collect();
        Arc::new(GradedAlgebra::new(names.iter().map(|s| s.to_string()).collect(), relations, None).unwrap())
    }

    fn k(a: &Arc<GradedAlgebra<F>>) -> GradedModule<F> {
        GradedModule::residue_field(a.clone())
    }

    #[test]
    fn resolutions() {
        let r1 = ring(&["x"], &[&[2]]);
        let res = minimal_resolution(&k(&r1), 5).unwrap();
        assert_eq!(res.betti(), vec![1; 6]);
        for n in 1..=5 {
            assert_eq!(res.complex().diff(n).format(&r1), vec![vec!["x".to_string()]]);
        }

        let r2 = ring(&["x", "y"], &[&[2, 0], &[0, 2]]);
        let res = minimal_resolution(&k(&r2), 6).unwrap();
        assert_eq!(res.betti(), vec![1, 2, 3, 4, 5, 6, 7]);
        assert!(res.complex().is_minimal());
        assert_eq!(res.complex().d_squared_failure(), None);
        assert!(res.complex().exactness_failures().is_empty());

        let r3 = ring(&["x", "y"], &[&[2, 0], &[1, 1], &[0, 2]]);
        let res = minimal_resolution(&k(&r3), 6).unwrap();
        assert_eq!(res.betti(), vec![1, 2, 4, 8, 16, 32, 64]);
    }

    #[test]
    fn x_cubed_alternates() {
        let r = ring(&["x"], &[&[3]]);
        let res = minimal_resolution(&k(&r), 4).unwrap();
        let f: Vec<String> = (1..=4).map(|n| res.complex().diff(n).format(&r)[0][0].clone()).collect();
        assert_eq!(f, ["x", "x^2", "x", "x^2"]);
    }

    #[test]
    fn complete_resolutions() {
        let r1 = ring(&["x"], &[&[2]]);
        let c = complete_resolution(&k(&r1), 6).unwrap();
        assert_eq!(c.betti().values, vec![1; 13]);
        assert!(!c.free_summand);
        assert!(c.complex.is_minimal());
        assert!(c.splice_image_matches());
        assert!(c.complex.exactness_failures().is_empty());
        assert!(c.total_acyclicity_failures().is_empty());

        let r2 = ring(&["x", "y"], &[&[2, 0], &[0, 2]]);
        let c = complete_resolution(&k(&r2), 6).unwrap();
        let b = c.betti();
        assert_eq!(b.plus(), vec![1, 2, 3, 4, 5, 6, 7]);
        assert_eq!(b.minus(), vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(negative_betti_via_dual(&k(&r2), 6).unwrap(), b.minus());
        assert_eq!(c.complex.d_squared_failure(), None);
        assert!(c.complex.exactness_failures().is_empty());
        assert!(c.total_acyclicity_failures().is_empty());
    }

    #[test]
    fn free_module_splice() {
        let r2 = ring(&["x", "y"], &[&[2, 0], &[0, 2]]);
        let a = GradedModule::free(r2.clone(), &FreeModule::new(vec![0]));
        let c = complete_resolution(&a, 3).unwrap();
        assert!(c.free_summand);
        let b = c.betti();
        assert_eq!(b.plus(), vec![1, 0, 0, 0]);
        assert_eq!(b.minus(), vec![1, 0, 0]);
        assert_eq!(c.complex.tate_ext_dims().values().sum::<usize>(), 0);
    }

    #[test]
    fn refuses_non_reflexive() {
        let r3 = ring(&["x", "y"], &[&[2, 0], &[1, 1], &[0, 2]]);
        match complete_resolution(&k(&r3), 2) {
            Err(Error::NotTotallyReflexive(msg)) => {
                assert!(msg.contains("reflexivity"));
                assert!(msg.contains("Ext^1(M,A)"));
            }
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn dualize_is_an_involution() {
        let r1 = ring(&["x"], &[&[2]]);
        let c = complete_resolution(&k(&r1), 3).unwrap().complex;
        assert_eq!(c.dualize().dualize(), c);
        let d = c.dualize();
        assert_eq!(d.window(), (-3, 3));
        assert_eq!(d.diff(1).format(&r1), vec![vec!["x".to_string()]]);
    }

    #[test]
    fn tate_dims_match_betti_for_minimal() {
        let r2 = ring(&["x", "y"], &[&[2, 0], &[0, 2]]);
        let c = complete_resolution(&k(&r2), 4).unwrap().complex;
        for (n, dim) in c.tate_ext_dims() {
            assert_eq!(dim, c.rank(n));
        }
    }

    #[test]
    fn direct_sum_doubles_betti() {
        let r2 = ring(&["x", "y"], &[&[2, 0], &[0, 2]]);
        let kk = k(&r2).direct_sum(&k(&r2));
        let b = minimal_resolution(&kk, 4).unwrap().betti();
        assert_eq!(b, vec![2, 4, 6, 8, 10]);
    }
}
