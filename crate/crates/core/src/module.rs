//! Finite-dimensional graded modules over a [`GradedAlgebra`], stored
//! extensionally: one vector space per internal degree plus the action of
//! each variable. Duals, syzygies, pushouts and Hom-against-`A` are all
//! plain linear algebra on that data.

use std::collections::BTreeMap;
use std::sync::Arc;


use crate::algebra::{GradedAlgebra, Monomial, Polynomial};
use crate::complex::minimal_resolution;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::free::{FreeModule, RingMatrix};
use crate::linalg::{LinearSolver, Matrix, Quotient, Subspace};

/// Cokernel presentation a module was built from.
#[derive(Clone, Debug)]
pub struct Presentation<F: PrimeField> {
    pub generators: FreeModule,
    pub relations: FreeModule,
    pub matrix: RingMatrix<F>,
}

#[derive(Clone, Debug)]
pub struct GradedModule<F: PrimeField> {
    algebra: Arc<GradedAlgebra<F>>,
    lo: i32,
    dims: Vec<usize>,
    // actions[i][d - lo] : M_d -> M_{d+1}
    actions: Vec<Vec<Matrix<F>>>,
    presentation: Option<Presentation<F>>,
}

/// Degree-`shift` map `source_d -> target_{d + shift}`.
#[derive(Clone, Debug)]
pub struct ModuleMap<F: PrimeField> {
    pub source: GradedModule<F>,
    pub target: GradedModule<F>,
    pub shift: i32,
    components: BTreeMap<i32, Matrix<F>>,
}

/// Minimal homogeneous generators, lowest degree first, then basis order.
#[derive(Clone, Debug)]
pub struct Generators<F> {
    pub twists: Vec<i32>,
    pub vectors: Vec<Vec<F>>,
}

impl<F: PrimeField> GradedModule<F> {
    /// Builds a module from pieces and actions; validates shapes, pairwise
    /// commutation and the relations of `A`, then trims zero ends.
    pub fn from_parts(
        algebra: Arc<GradedAlgebra<F>>,
        lo: i32,
        dims: Vec<usize>,
        actions: Vec<Vec<Matrix<F>>>,
    ) -> Result<Self> {
        let n = algebra.nvars();
        if actions.len() != n {
            return Err(Error::InvalidInput(format!("expected {n} action families, got {}", actions.len())));
        }
        for fam in &actions {
            if fam.len() != dims.len() {
                return Err(Error::InvalidInput("action family length does not match pieces".into()));
            }
            for (k, m) in fam.iter().enumerate() {
                let next = dims.get(k + 1).copied().unwrap_or(0);
                if m.rows() != next || m.cols() != dims[k] {
                    return Err(Error::InvalidInput(format!("action matrix at degree {} has wrong shape", lo + k as i32)));
                }
            }
        }
        let mut m = GradedModule {
            algebra,
            lo,
            dims,
            actions,
            presentation: None,
        };
        m.trim();
        if !m.actions_commute() {
            return Err(Error::InvalidInput("variable actions do not commute".into()));
        }
        if !m.satisfies_relations() {
            return Err(Error::InvalidInput("module is not annihilated by the relations of the ring".into()));
        }
        Ok(m)
    }

    /// Trusted constructor for data produced internally.
    fn from_parts_unchecked(algebra: Arc<GradedAlgebra<F>>, lo: i32, dims: Vec<usize>, actions: Vec<Vec<Matrix<F>>>) -> Self {
        let mut m = GradedModule {
            algebra,
            lo,
            dims,
            actions,
            presentation: None,
        };
        m.trim();
        debug_assert!(m.actions_commute());
        m
    }

    fn trim(&mut self) {
        while self.dims.last() == Some(&0) {
            self.dims.pop();
            for fam in &mut self.actions {
                fam.pop();
            }
        }
        if let Some(last) = self.dims.len().checked_sub(1) {
            for fam in &mut self.actions {
                fam[last] = Matrix::zeros(0, self.dims[last]);
            }
        }
        let lead = self.dims.iter().take_while(|&&d| d == 0).count();
        if lead > 0 {
            self.dims.drain(..lead);
            for fam in &mut self.actions {
                fam.drain(..lead);
            }
            self.lo += lead as i32;
        }
        if self.dims.is_empty() {
            self.lo = 0;
        }
    }

    pub fn zero(algebra: Arc<GradedAlgebra<F>>) -> Self {
        let n = algebra.nvars();
        GradedModule {
            algebra,
            lo: 0,
            dims: Vec::new(),
            actions: vec![Vec::new(); n],
            presentation: None,
        }
    }

    /// The free module `⊕ A(-e_j)`.
    pub fn free(algebra: Arc<GradedAlgebra<F>>, free: &FreeModule) -> Self {
        let Some((lo, hi)) = free.degree_bounds(&algebra) else {
            return Self::zero(algebra);
        };
        let dims: Vec<usize> = (lo..=hi).map(|d| free.piece_dim(&algebra, d)).collect();
        let actions = (0..algebra.nvars())
            .map(|i| (lo..=hi).map(|d| free.var_action(&algebra, i, d)).collect())
            .collect();
        let mut m = Self::from_parts_unchecked(algebra, lo, dims, actions);
        m.presentation = Some(Presentation {
            generators: free.clone(),
            relations: FreeModule::default(),
            matrix: RingMatrix::zeros(&m.algebra, free.rank(), 0),
        });
        m
    }

    /// The residue field `k = A / m` in degree 0.
    pub fn residue_field(algebra: Arc<GradedAlgebra<F>>) -> Self {
        let n = algebra.nvars();
        Self::from_parts_unchecked(algebra, 0, vec![1], vec![vec![Matrix::zeros(0, 1)]; n])
    }

    /// `coker(P : ⊕ A(-c_j) -> ⊕ A(-r_i))` computed degreewise.
    pub fn from_presentation(
        algebra: Arc<GradedAlgebra<F>>,
        row_twists: Vec<i32>,
        col_twists: Vec<i32>,
        entries: &[Vec<Polynomial<F>>],
    ) -> Result<Self> {
        if entries.len() != row_twists.len() || entries.iter().any(|r| r.len() != col_twists.len()) {
            return Err(Error::InvalidInput("presentation matrix shape does not match twists".into()));
        }
        let alg = &*algebra;
        let mut matrix = RingMatrix::zeros(alg, row_twists.len(), col_twists.len());
        for (i, row) in entries.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                if p.is_zero() {
                    continue;
                }
                let want = col_twists[j] - row_twists[i];
                match p.homogeneous_degree() {
                    Some(d) if d as i32 == want => {}
                    _ => {
                        return Err(Error::NotHomogeneous(format!(
                            "entry ({i},{j}) = {} must be homogeneous of degree {want}",
                            p.format(alg.names())
                        )))
                    }
                }
                *matrix.get_mut(i, j) = alg.normal_form(p);
            }
        }
        let generators = FreeModule::new(row_twists);
        let relations = FreeModule::new(col_twists);
        let ambient = Self::free(algebra.clone(), &generators);
        let mut images = BTreeMap::new();
        for d in ambient.degrees() {
            let img = matrix.degree_matrix(alg, &relations, &generators, 0, d);
            images.insert(d, Subspace::spanned_by(img.rows(), &img.columns()));
        }
        let mut m = ambient.quotient(&images);
        m.presentation = Some(Presentation {
            generators,
            relations,
            matrix,
        });
        Ok(m)
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra<F>> {
        &self.algebra
    }

    pub fn presentation(&self) -> Option<&Presentation<F>> {
        self.presentation.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.dims.len() as i32 - 1
    }

    /// Degrees of the support window (empty for the zero module).
    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        if self.dims.is_empty() {
            #[allow(clippy::reversed_empty_ranges)]
            return 1..=0;
        }
        self.lo..=self.hi()
    }

    pub fn dim(&self, d: i32) -> usize {
        if d < self.lo {
            return 0;
        }
        self.dims.get((d - self.lo) as usize).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Piece dimensions keyed by degree.
    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.degrees().map(|d| (d, self.dim(d))).collect()
    }

    pub fn action(&self, i: usize, d: i32) -> Matrix<F> {
        if d < self.lo || d > self.hi() {
            return Matrix::zeros(self.dim(d + 1), self.dim(d));
        }
        self.actions[i][(d - self.lo) as usize].clone()
    }

    /// Action of a monomial from `M_d` to `M_{d + deg m}`.
    pub fn monomial_action(&self, m: &Monomial, d: i32) -> Matrix<F> {
        let mut acc = Matrix::identity(self.dim(d));
        let mut cur = d;
        for i in m.factors() {
            acc = self.action(i, cur).mul(&acc);
            cur += 1;
        }
        acc
    }

    /// Action of a homogeneous polynomial of degree `deg` on `M_d`.
    pub fn polynomial_action(&self, p: &Polynomial<F>, d: i32, deg: usize) -> Matrix<F> {
        let mut acc = Matrix::zeros(self.dim(d + deg as i32), self.dim(d));
        for (m, c) in p.terms() {
            acc = acc.add(&self.monomial_action(m, d).scale(c));
        }
        acc
    }

    fn actions_commute(&self) -> bool {
        let n = self.algebra.nvars();
        for d in self.degrees() {
            for i in 0..n {
                for j in i + 1..n {
                    let ij = self.action(i, d + 1).mul(&self.action(j, d));
                    let ji = self.action(j, d + 1).mul(&self.action(i, d));
                    if ij != ji {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn satisfies_relations(&self) -> bool {
        for f in self.algebra.relations() {
            let deg = f.max_degree();
            for d in self.degrees() {
                if !self.polynomial_action(f, d, deg).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// `M(-s)`: the same module with every degree raised by `s`.
    pub fn twist(&self, s: i32) -> Self {
        let mut m = self.clone();
        if !m.dims.is_empty() {
            m.lo += s;
        }
        m.presentation = None;
        m
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let dims: Vec<usize> = (lo..=hi).map(|d| self.dim(d) + other.dim(d)).collect();
        let actions = (0..self.algebra.nvars())
            .map(|i| {
                (lo..=hi)
                    .map(|d| {
                        let mut m = Matrix::zeros(self.dim(d + 1) + other.dim(d + 1), self.dim(d) + other.dim(d));
                        m.set_block(0, 0, &self.action(i, d));
                        m.set_block(self.dim(d + 1), self.dim(d), &other.action(i, d));
                        m
                    })
                    .collect()
            })
            .collect();
        Self::from_parts_unchecked(self.algebra.clone(), lo, dims, actions)
    }

    /// Quotient by a graded submodule given degreewise. The submodule must
    /// be closed under the action.
    pub fn quotient(&self, sub: &BTreeMap<i32, Subspace<F>>) -> Self {
        let quotients: BTreeMap<i32, Quotient<F>> = self
            .degrees()
            .map(|d| {
                let s = sub.get(&d).cloned().unwrap_or_else(|| Subspace::new(self.dim(d)));
                (d, Quotient::new(s))
            })
            .collect();
        if quotients.is_empty() {
            return Self::zero(self.algebra.clone());
        }
        let dims: Vec<usize> = quotients.values().map(Quotient::dim).collect();
        let actions = (0..self.algebra.nvars())
            .map(|i| {
                self.degrees()
                    .map(|d| {
                        let q = &quotients[&d];
                        let act = self.action(i, d);
                        let cols: Vec<Vec<F>> = (0..q.dim())
                            .map(|k| {
                                let img = act.mul_vec(&q.lift(k));
                                match quotients.get(&(d + 1)) {
                                    Some(next) => next.project(&img),
                                    None => Vec::new(),
                                }
                            })
                            .collect();
                        let rows = quotients.get(&(d + 1)).map_or(0, Quotient::dim);
                        Matrix::from_cols(rows, &cols)
                    })
                    .collect()
            })
            .collect();
        Self::from_parts_unchecked(self.algebra.clone(), self.lo, dims, actions)
    }

    /// Submodule with basis the columns of `bases[d]` in each degree, and its
    /// inclusion. Fails if the span is not closed under the action.
    pub fn submodule(&self, bases: &BTreeMap<i32, Matrix<F>>) -> Result<(Self, ModuleMap<F>)> {
        let degrees: Vec<i32> = self.degrees().collect();
        if degrees.is_empty() {
            let z = Self::zero(self.algebra.clone());
            return Ok((z.clone(), ModuleMap::zero(z, self.clone())));
        }
        let basis = |d: i32| bases.get(&d).cloned().unwrap_or_else(|| Matrix::zeros(self.dim(d), 0));
        let solvers: BTreeMap<i32, LinearSolver<F>> = degrees.iter().map(|&d| (d, LinearSolver::new(&basis(d)))).collect();
        let lo = degrees[0];
        let dims: Vec<usize> = degrees.iter().map(|&d| basis(d).cols()).collect();
        let mut actions = Vec::new();
        for i in 0..self.algebra.nvars() {
            let mut fam = Vec::new();
            for &d in &degrees {
                let b = basis(d);
                let img = self.action(i, d).mul(&b);
                let next_dim = basis(d + 1).cols();
                let mut m = Matrix::zeros(next_dim, b.cols());
                for k in 0..b.cols() {
                    let v = img.column(k);
                    if v.iter().all(|x| x.is_zero()) {
                        continue;
                    }
                    let solver = solvers
                        .get(&(d + 1))
                        .ok_or_else(|| Error::Fault("submodule not closed under the action".into()))?;
                    let c = solver
                        .solve(&v)
                        .ok_or_else(|| Error::Fault("submodule not closed under the action".into()))?;
                    for (r, x) in c.into_iter().enumerate() {
                        m[(r, k)] = x;
                    }
                }
                fam.push(m);
            }
            actions.push(fam);
        }
        let sub = Self::from_parts_unchecked(self.algebra.clone(), lo, dims, actions);
        let components = degrees.iter().map(|&d| (d, basis(d))).collect();
        let inc = ModuleMap::new(sub.clone(), self.clone(), 0, components);
        Ok((sub, inc))
    }

    /// Minimal generators via Nakayama: in each degree, a complement of
    /// `mM_d = Σ x_i M_{d-1}` chosen among the standard basis vectors.
    pub fn minimal_generators(&self) -> Generators<F> {
        let mut twists = Vec::new();
        let mut vectors = Vec::new();
        for d in self.degrees() {
            let n = self.dim(d);
            let mut span = Subspace::new(n);
            for i in 0..self.algebra.nvars() {
                for col in self.action(i, d - 1).columns() {
                    span.insert(&col);
                }
            }
            for k in 0..n {
                let mut e = vec![F::zero(); n];
                e[k] = F::one();
                if span.insert(&e) {
                    twists.push(d);
                    vectors.push(e);
                }
            }
        }
        Generators { twists, vectors }
    }

    /// Matrix of the cover `⊕ A(-e_j) -> M` in degree `d`.
    pub fn cover_matrix(&self, gens: &Generators<F>, d: i32) -> Matrix<F> {
        let alg = &self.algebra;
        let free = FreeModule::new(gens.twists.clone());
        let mut m = Matrix::zeros(self.dim(d), free.piece_dim(alg, d));
        let offs = free.offsets(alg, d);
        for (j, (&e, g)) in gens.twists.iter().zip(&gens.vectors).enumerate() {
            for (k, mono) in alg.basis_at(d - e).iter().enumerate() {
                let col = self.monomial_action(mono, e).mul_vec(g);
                for (r, v) in col.into_iter().enumerate() {
                    m[(r, offs[j] + k)] = v;
                }
            }
        }
        m
    }

    /// `Ω M`: kernel of the minimal cover, with its inclusion into the free
    /// cover.
    pub fn syzygy(&self) -> Result<(Self, ModuleMap<F>)> {
        let gens = self.minimal_generators();
        let free = FreeModule::new(gens.twists.clone());
        let ambient = Self::free(self.algebra.clone(), &free);
        let mut bases = BTreeMap::new();
        for d in ambient.degrees() {
            bases.insert(d, self.cover_matrix(&gens, d).kernel_basis());
        }
        ambient.submodule(&bases)
    }

    /// `Hom_A(M, A)` with `(x f)(m) = x f(m)`.
    pub fn dual(&self) -> Dual<F> {
        Dual::new(self)
    }

    /// Evaluation `M -> M**`.
    pub fn biduality_map(&self) -> ModuleMap<F> {
        let d1 = self.dual();
        let d2 = d1.module.dual();
        let alg = &self.algebra;
        let mut components = BTreeMap::new();
        for d in self.degrees() {
            let n = self.dim(d);
            let mut comp = Matrix::zeros(d2.module.dim(d), n);
            for k in 0..n {
                let mut m = vec![F::zero(); n];
                m[k] = F::one();
                let mut blocks = BTreeMap::new();
                for s in d1.module.degrees() {
                    let ds = d1.module.dim(s);
                    let mut g = Matrix::zeros(alg.dim_at(s + d), ds);
                    for c in 0..ds {
                        let mut phi = vec![F::zero(); ds];
                        phi[c] = F::one();
                        for (r, v) in d1.eval(s, &phi, d, &m).into_iter().enumerate() {
                            g[(r, c)] = v;
                        }
                    }
                    blocks.insert(s, g);
                }
                let coords = d2.coordinates_of(d, &blocks).expect("evaluation map is A-linear");
                for (r, v) in coords.into_iter().enumerate() {
                    comp[(r, k)] = v;
                }
            }
            components.insert(d, comp);
        }
        ModuleMap::new(self.clone(), d2.module, 0, components)
    }

    /// `dim_k Ext^n_A(M, A)` for `1 <= n <= n_max`, index `n - 1`.
    pub fn ext_against_ring(&self, n_max: usize) -> Result<Vec<usize>> {
        let res = minimal_resolution(self, n_max + 1)?;
        let c = res.complex();
        let alg = &*self.algebra;
        let mut out = Vec::with_capacity(n_max);
        for n in 1..=n_max as i32 {
            let fn_dual = c.module(n).dual();
            let prev_dual = c.module(n - 1).dual();
            let next_dual = c.module(n + 1).dual();
            let into = c.diff(n).transpose(); // F_{n-1}* -> F_n*
            let out_of = c.diff(n + 1).transpose(); // F_n* -> F_{n+1}*
            let mut total = 0usize;
            if let Some((lo, hi)) = fn_dual.degree_bounds(alg) {
                for d in lo..=hi {
                    let dim = fn_dual.piece_dim(alg, d);
                    let r_out = out_of.degree_matrix(alg, &fn_dual, &next_dual, 0, d).rank();
                    let r_in = into.degree_matrix(alg, &prev_dual, &fn_dual, 0, d).rank();
                    total += dim - r_out - r_in;
                }
            }
            out.push(total);
        }
        Ok(out)
    }

    /// `Ext^n(M, A)` on prefixes of length 1, 2, 4, ... up to `window`,
    /// stopping at the first prefix with a nonzero value. Saves resolving
    /// far out when growth is exponential.
    fn ext_until_nonzero(&self, window: usize) -> Result<Vec<usize>> {
        let mut n = 1;
        loop {
            let v = self.ext_against_ring(n)?;
            if n >= window || v.iter().any(|&e| e != 0) {
                return Ok(v);
            }
            n = (2 * n).min(window);
        }
    }

    /// Window-bounded G-dimension zero certificate. When some Ext is
    /// nonzero, the reported Ext vector may be shorter than the window.
    pub fn gdim_zero_check(&self, window: usize) -> Result<GdimCertificate> {
        let window = window.max(1);
        let reflexive = self.biduality_map().is_bijective();
        let ext_m = self.ext_until_nonzero(window)?;
        let ext_dual = self.dual().module.ext_until_nonzero(window)?;
        Ok(GdimCertificate {
            window,
            reflexive,
            ext_m_vanishes: ext_m.iter().all(|&e| e == 0),
            ext_mdual_vanishes: ext_dual.iter().all(|&e| e == 0),
            ext_m,
            ext_mdual: ext_dual,
        })
    }

    /// `(M ⊕ N) / {(f(l), -g(l))}` for degree-0 maps out of a shared source.
    pub fn pushout(f: &ModuleMap<F>, g: &ModuleMap<F>) -> Result<Self> {
        if f.shift != 0 || g.shift != 0 {
            return Err(Error::Precondition("pushout needs degree-0 maps".into()));
        }
        if f.source.dims() != g.source.dims() {
            return Err(Error::Precondition("pushout maps must share a source".into()));
        }
        let (m, n) = (&f.target, &g.target);
        let sum = m.direct_sum(n);
        let mut images = BTreeMap::new();
        for d in sum.degrees() {
            let mut s = Subspace::new(sum.dim(d));
            let fd = f.component(d);
            let gd = g.component(d);
            for k in 0..f.source.dim(d) {
                let mut v = fd.column(k);
                v.extend(gd.column(k).into_iter().map(|x| -x));
                s.insert(&v);
            }
            images.insert(d, s);
        }
        Ok(sum.quotient(&images))
    }

    /// `M_1 (x)_k A_2` over `A_1 (x)_k A_2`.
    pub fn tensor_extend(&self, other: &GradedAlgebra<F>) -> Result<Self> {
        let big = Arc::new(self.algebra.tensor(other)?);
        if self.is_zero() {
            return Ok(Self::zero(big));
        }
        let top2 = other.top() as i32;
        let lo = self.lo;
        let hi = self.hi() + top2;
        // piece d = ⊕_a M_a (x) A2_{d-a}, blocks in increasing a
        let block_offsets = |d: i32| -> Vec<(i32, usize)> {
            let mut acc = 0;
            let mut out = Vec::new();
            for a in self.degrees() {
                out.push((a, acc));
                acc += self.dim(a) * other.dim_at(d - a);
            }
            out
        };
        let piece_dim = |d: i32| -> usize { self.degrees().map(|a| self.dim(a) * other.dim_at(d - a)).sum() };
        let dims: Vec<usize> = (lo..=hi).map(piece_dim).collect();
        let n1 = self.algebra.nvars();
        let mut actions = Vec::new();
        for i in 0..big.nvars() {
            let mut fam = Vec::new();
            for d in lo..=hi {
                let src = block_offsets(d);
                let tgt = block_offsets(d + 1);
                let mut m = Matrix::zeros(piece_dim(d + 1), piece_dim(d));
                for (idx, &(a, off)) in src.iter().enumerate() {
                    let b = d - a;
                    let da = self.dim(a);
                    let db = other.dim_at(b);
                    if da == 0 || db == 0 {
                        continue;
                    }
                    if i < n1 {
                        // x_i acts on the M_1 factor: block (a, b) -> (a + 1, b)
                        let Some(&(_, toff)) = tgt.get(idx + 1) else { continue };
                        let act = self.action(i, a);
                        for p in 0..da {
                            for q in 0..db {
                                for p2 in 0..act.rows() {
                                    let c = act[(p2, p)];
                                    if !c.is_zero() {
                                        m[(toff + p2 * db + q, off + p * db + q)] = c;
                                    }
                                }
                            }
                        }
                    } else {
                        let act = other.var_action(i - n1, b);
                        let toff = tgt[idx].1;
                        let db2 = other.dim_at(b + 1);
                        for p in 0..da {
                            for q in 0..db {
                                for q2 in 0..db2 {
                                    let c = act[(q2, q)];
                                    if !c.is_zero() {
                                        m[(toff + p * db2 + q2, off + p * db + q)] = c;
                                    }
                                }
                            }
                        }
                    }
                }
                fam.push(m);
            }
            actions.push(fam);
        }
        GradedModule::from_parts(big, lo, dims, actions)
    }
}

/// `Hom_A(M, A)` together with the data to evaluate its elements.
///
/// An element of degree `s` is a family of matrices `f_d : M_d -> A_{d+s}`;
/// it is stored as the row-major concatenation of those blocks over the
/// degrees of `M`.
#[derive(Clone, Debug)]
pub struct Dual<F: PrimeField> {
    pub module: GradedModule<F>,
    source_degrees: Vec<(i32, usize)>,
    // basis of degree-s homomorphisms, columns in the concatenated layout
    bases: BTreeMap<i32, Matrix<F>>,
    solvers: BTreeMap<i32, LinearSolver<F>>,
}

impl<F: PrimeField> Dual<F> {
    fn new(m: &GradedModule<F>) -> Self {
        let alg = m.algebra.clone();
        let source_degrees: Vec<(i32, usize)> = m.degrees().map(|d| (m.dim(d), d)).map(|(n, d)| (d, n)).collect();
        if m.is_zero() {
            return Dual {
                module: GradedModule::zero(alg),
                source_degrees,
                bases: BTreeMap::new(),
                solvers: BTreeMap::new(),
            };
        }
        let top = alg.top() as i32;
        let (s_lo, s_hi) = (-m.hi(), top - m.lo());
        let mut bases = BTreeMap::new();
        for s in s_lo..=s_hi {
            let layout = Self::layout(&alg, &source_degrees, s);
            let unknowns = layout.last().map_or(0, |l| l.2 + alg.dim_at(l.0 + s) * l.1);
            if unknowns == 0 {
                continue;
            }
            // equivariance: x_i f_d - f_{d+1} x_i = 0 as maps M_d -> A_{d+s+1}
            let mut rows: Vec<Vec<F>> = Vec::new();
            for i in 0..alg.nvars() {
                for &(d, md, off) in &layout {
                    let ra = alg.dim_at(d + s); // rows of f_d
                    let ra1 = alg.dim_at(d + s + 1);
                    let xa = alg.var_action(i, d + s);
                    let xm = m.action(i, d);
                    let next = layout.iter().find(|l| l.0 == d + 1);
                    for r in 0..ra1 {
                        for c in 0..md {
                            let mut eq = vec![F::zero(); unknowns];
                            for k in 0..ra {
                                let a = xa[(r, k)];
                                if !a.is_zero() {
                                    eq[off + k * md + c] = eq[off + k * md + c] + a;
                                }
                            }
                            if let Some(&(_, md1, off1)) = next {
                                for c1 in 0..md1 {
                                    let b = xm[(c1, c)];
                                    if !b.is_zero() {
                                        eq[off1 + r * md1 + c1] = eq[off1 + r * md1 + c1] - b;
                                    }
                                }
                            }
                            if eq.iter().any(|x| !x.is_zero()) {
                                rows.push(eq);
                            }
                        }
                    }
                }
            }
            let basis = if rows.is_empty() {
                Matrix::identity(unknowns)
            } else {
                Matrix::from_rows(rows).kernel_basis()
            };
            if basis.cols() > 0 {
                bases.insert(s, basis);
            }
        }
        let solvers: BTreeMap<i32, LinearSolver<F>> = bases.iter().map(|(&s, b)| (s, LinearSolver::new(b))).collect();

        let (lo, hi) = match (bases.keys().next(), bases.keys().last()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => {
                return Dual {
                    module: GradedModule::zero(alg),
                    source_degrees,
                    bases,
                    solvers,
                }
            }
        };
        let dims: Vec<usize> = (lo..=hi).map(|s| bases.get(&s).map_or(0, Matrix::cols)).collect();
        let mut actions = Vec::new();
        for i in 0..alg.nvars() {
            let mut fam = Vec::new();
            for s in lo..=hi {
                let src_dim = bases.get(&s).map_or(0, Matrix::cols);
                let tgt_dim = bases.get(&(s + 1)).map_or(0, Matrix::cols);
                let mut act = Matrix::zeros(tgt_dim, src_dim);
                if src_dim > 0 && tgt_dim > 0 {
                    let layout = Self::layout(&alg, &source_degrees, s);
                    let layout1 = Self::layout(&alg, &source_degrees, s + 1);
                    let len1 = layout1.last().map_or(0, |l| l.2 + alg.dim_at(l.0 + s + 1) * l.1);
                    for col in 0..src_dim {
                        let f = bases[&s].column(col);
                        let mut g = vec![F::zero(); len1];
                        for (&(d, md, off), &(_, _, off1)) in layout.iter().zip(&layout1) {
                            let ra = alg.dim_at(d + s);
                            let block = Matrix::from_rows(
                                (0..ra).map(|r| f[off + r * md..off + (r + 1) * md].to_vec()).collect(),
                            );
                            let block = if ra == 0 { Matrix::zeros(0, md) } else { block };
                            let moved = alg.var_action(i, d + s).mul(&block);
                            for r in 0..moved.rows() {
                                for c in 0..md {
                                    g[off1 + r * md + c] = moved[(r, c)];
                                }
                            }
                        }
                        let coords = solvers[&(s + 1)].solve(&g).expect("dual closed under action");
                        for (r, v) in coords.into_iter().enumerate() {
                            act[(r, col)] = v;
                        }
                    }
                }
                fam.push(act);
            }
            actions.push(fam);
        }
        let module = GradedModule::from_parts_unchecked(alg, lo, dims, actions);
        Dual {
            module,
            source_degrees,
            bases,
            solvers,
        }
    }

    /// `(degree, dim M_d, offset)` of each block for homomorphisms of degree `s`.
    fn layout(alg: &GradedAlgebra<F>, source: &[(i32, usize)], s: i32) -> Vec<(i32, usize, usize)> {
        let mut acc = 0;
        source
            .iter()
            .map(|&(d, md)| {
                let here = (d, md, acc);
                acc += alg.dim_at(d + s) * md;
                here
            })
            .collect()
    }

    /// The block `f_d : M_d -> A_{d+s}` of the dual element with the given
    /// coordinates.
    pub fn block(&self, s: i32, coords: &[F], d: i32) -> Matrix<F> {
        let alg = &self.module.algebra;
        let Some(basis) = self.bases.get(&s) else {
            let md = self.source_degrees.iter().find(|x| x.0 == d).map_or(0, |x| x.1);
            return Matrix::zeros(alg.dim_at(d + s), md);
        };
        let f = basis.mul_vec(coords);
        let layout = Self::layout(alg, &self.source_degrees, s);
        let Some(&(_, md, off)) = layout.iter().find(|l| l.0 == d) else {
            return Matrix::zeros(alg.dim_at(d + s), 0);
        };
        let ra = alg.dim_at(d + s);
        let mut out = Matrix::zeros(ra, md);
        for r in 0..ra {
            for c in 0..md {
                out[(r, c)] = f[off + r * md + c];
            }
        }
        out
    }

    /// `f(m)` for `f` of degree `s` and `m ∈ M_d`, as a vector over `A_{d+s}`.
    pub fn eval(&self, s: i32, coords: &[F], d: i32, m: &[F]) -> Vec<F> {
        self.block(s, coords, d).mul_vec(m)
    }

    /// Coordinates of the homomorphism of degree `s` given by its blocks.
    pub fn coordinates_of(&self, s: i32, blocks: &BTreeMap<i32, Matrix<F>>) -> Option<Vec<F>> {
        let alg = &self.module.algebra;
        let layout = Self::layout(alg, &self.source_degrees, s);
        let len = layout.last().map_or(0, |l| l.2 + alg.dim_at(l.0 + s) * l.1);
        let mut v = vec![F::zero(); len];
        for &(d, md, off) in &layout {
            if let Some(b) = blocks.get(&d) {
                for r in 0..b.rows() {
                    for c in 0..md {
                        v[off + r * md + c] = b[(r, c)];
                    }
                }
            }
        }
        match self.solvers.get(&s) {
            Some(solver) => solver.solve(&v),
            None => v.iter().all(|x| x.is_zero()).then(Vec::new),
        }
    }
}

/// Outcome of [`GradedModule::gdim_zero_check`]; valid only for the stated
/// window of Ext indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GdimCertificate {
    pub window: usize,
    pub reflexive: bool,
    pub ext_m_vanishes: bool,
    pub ext_mdual_vanishes: bool,
    pub ext_m: Vec<usize>,
    pub ext_mdual: Vec<usize>,
}

impl GdimCertificate {
    pub fn passes(&self) -> bool {
        self.reflexive && self.ext_m_vanishes && self.ext_mdual_vanishes
    }

    /// Names of the failed conditions, e.g. `["reflexivity", "Ext^1(M,A)"]`.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.reflexive {
            out.push("reflexivity".to_string());
        }
        if let Some(n) = self.ext_m.iter().position(|&e| e != 0) {
            out.push(format!("Ext^{}(M,A)", n + 1));
        }
        if let Some(n) = self.ext_mdual.iter().position(|&e| e != 0) {
            out.push(format!("Ext^{}(M*,A)", n + 1));
        }
        out
    }
}

impl<F: PrimeField> ModuleMap<F> {
    pub fn new(source: GradedModule<F>, target: GradedModule<F>, shift: i32, components: BTreeMap<i32, Matrix<F>>) -> Self {
        ModuleMap {
            source,
            target,
            shift,
            components,
        }
    }

    pub fn zero(source: GradedModule<F>, target: GradedModule<F>) -> Self {
        Self::new(source, target, 0, BTreeMap::new())
    }

    pub fn identity(m: &GradedModule<F>) -> Self {
        let components = m.degrees().map(|d| (d, Matrix::identity(m.dim(d)))).collect();
        Self::new(m.clone(), m.clone(), 0, components)
    }

    pub fn component(&self, d: i32) -> Matrix<F> {
        self.components
            .get(&d)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.target.dim(d + self.shift), self.source.dim(d)))
    }

    /// Commutes with every variable action.
    pub fn is_equivariant(&self) -> bool {
        let n = self.source.algebra.nvars();
        self.source.degrees().all(|d| {
            (0..n).all(|i| {
                let a = self.target.action(i, d + self.shift).mul(&self.component(d));
                let b = self.component(d + 1).mul(&self.source.action(i, d));
                a == b
            })
        })
    }

    pub fn is_bijective(&self) -> bool {
        let lo = self.source.lo().min(self.target.lo() - self.shift);
        let hi = self.source.hi().max(self.target.hi() - self.shift);
        if self.source.is_zero() && self.target.is_zero() {
            return true;
        }
        (lo..=hi).all(|d| {
            let c = self.component(d);
            c.rows() == c.cols() && c.rank() == c.cols()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;

    type F = Fp<32003>;

    fn ring(names: &[&str], rels: &[&[(&[u32], i64)]]) -> Arc<GradedAlgebra<F>> {
        let n = names.len();
        let relations = rels
            .iter()
            .map(|terms| {
                let mut p = Polynomial::zero(n);
                for (e, c) in terms.iter() {
                    p.add_term(Monomial(e.to_vec()), F::new(*c));
                }
                p
            })
            .collect();
        Arc::new(GradedAlgebra::new(names.iter().map(|s| s.to_string()).collect(), relations, None).unwrap())
    }

    fn r1() -> Arc<GradedAlgebra<F>> {
        ring(&["x"], &[&[(&[2], 1)]])
    }

    fn r2() -> Arc<GradedAlgebra<F>> {
        ring(&["x", "y"], &[&[(&[2, 0], 1)], &[(&[0, 2], 1)]])
    }

    fn r3() -> Arc<GradedAlgebra<F>> {
        ring(&["x", "y"], &[&[(&[2, 0], 1)], &[(&[1, 1], 1)], &[(&[0, 2], 1)]])
    }

    fn var(a: &GradedAlgebra<F>, i: usize) -> Polynomial<F> {
        Polynomial::var(a.nvars(), i)
    }

    fn dims(m: &GradedModule<F>) -> Vec<usize> {
        m.degrees().map(|d| m.dim(d)).collect()
    }

    #[test]
    fn presentations() {
        let a = r2();
        let free = GradedModule::from_presentation(a.clone(), vec![0], vec![], &[vec![]]).unwrap();
        assert_eq!(dims(&free), vec![1, 2, 1]);

        let a1 = r1();
        let k = GradedModule::from_presentation(a1.clone(), vec![0], vec![1], &[vec![var(&a1, 0)]]).unwrap();
        assert_eq!(dims(&k), vec![1]);

        let k2 = GradedModule::from_presentation(a.clone(), vec![0], vec![1, 1], &[vec![var(&a, 0), var(&a, 1)]]).unwrap();
        assert_eq!(dims(&k2), vec![1]);
        assert_eq!(k2.lo(), 0);
    }

    #[test]
    fn presentation_rejects_wrong_degree() {
        let a = r2();
        let r = GradedModule::from_presentation(a.clone(), vec![0], vec![2], &[vec![var(&a, 0)]]);
        assert!(matches!(r, Err(Error::NotHomogeneous(_))));
    }

    #[test]
    fn rejects_noncommuting_actions() {
        let a = r2();
        // x: e0 -> e1, y: e0 -> e2 ... set up a non-commuting pair on dims (1,1,1)
        let x = vec![Matrix::from_i64_rows(&[&[1]]), Matrix::from_i64_rows(&[&[1]]), Matrix::zeros(0, 1)];
        let y = vec![Matrix::from_i64_rows(&[&[1]]), Matrix::from_i64_rows(&[&[2]]), Matrix::zeros(0, 1)];
        let r = GradedModule::from_parts(a, 0, vec![1, 1, 1], vec![x, y]);
        assert!(r.is_err());
    }

    #[test]
    fn duals() {
        let a = r2();
        let free = GradedModule::free(a.clone(), &FreeModule::new(vec![0]));
        let d = free.dual().module;
        assert_eq!(d.dims(), free.dims());

        let k = GradedModule::residue_field(a.clone());
        let dk = k.dual().module;
        // maps k -> socle xy, raising degree by 2
        assert_eq!(dk.dims(), BTreeMap::from([(2, 1)]));

        let k3 = GradedModule::residue_field(r3());
        assert_eq!(k3.dual().module.total_dim(), 2);
    }

    #[test]
    fn biduality() {
        let a = r2();
        assert!(GradedModule::free(a.clone(), &FreeModule::new(vec![0])).biduality_map().is_bijective());
        let k = GradedModule::residue_field(a);
        let ev = k.biduality_map();
        assert!(ev.is_bijective());
        assert!(ev.is_equivariant());

        let k3 = GradedModule::residue_field(r3());
        let ev3 = k3.biduality_map();
        assert_eq!(ev3.target.total_dim(), 4);
        assert!(!ev3.is_bijective());
    }

    #[test]
    fn generators() {
        let a = r2();
        let free = GradedModule::free(a.clone(), &FreeModule::new(vec![0]));
        assert_eq!(free.minimal_generators().twists, vec![0]);

        let k = GradedModule::residue_field(a.clone());
        let sum = k.direct_sum(&GradedModule::free(a.clone(), &FreeModule::new(vec![1])));
        assert_eq!(sum.minimal_generators().twists, vec![0, 1]);

        let (m, _) = k.syzygy().unwrap();
        assert_eq!(m.minimal_generators().twists, vec![1, 1]);
    }

    #[test]
    fn syzygies() {
        let a = r2();
        let free = GradedModule::free(a.clone(), &FreeModule::new(vec![0]));
        assert!(free.syzygy().unwrap().0.is_zero());

        let a1 = r1();
        let (om, inc) = GradedModule::residue_field(a1).syzygy().unwrap();
        assert_eq!(om.dims(), BTreeMap::from([(1, 1)]));
        assert!(inc.is_equivariant());

        let (om2, _) = GradedModule::residue_field(a).syzygy().unwrap();
        assert_eq!(om2.dims(), BTreeMap::from([(1, 2), (2, 1)]));
        let (om3, _) = om2.syzygy().unwrap();
        assert_eq!(om3.minimal_generators().twists.len(), 3);
    }

    #[test]
    fn pushouts() {
        let a = r2();
        let k = GradedModule::residue_field(a.clone());
        let n = GradedModule::free(a.clone(), &FreeModule::new(vec![0]));
        let zf = ModuleMap::zero(k.clone(), k.clone());
        let zg = ModuleMap::zero(k.clone(), n.clone());
        let p = GradedModule::pushout(&zf, &zg).unwrap();
        assert_eq!(p.dims(), k.direct_sum(&n).dims());

        // absorption: pushout of id_L with g : L -> N is N
        let (om, inc) = k.syzygy().unwrap();
        let id = ModuleMap::identity(&om);
        let p2 = GradedModule::pushout(&id, &inc).unwrap();
        assert_eq!(p2.dims(), inc.target.dims());
    }

    #[test]
    fn ext_windows() {
        let a = r2();
        let free = GradedModule::free(a.clone(), &FreeModule::new(vec![0]));
        assert!(free.ext_against_ring(3).unwrap().iter().all(|&e| e == 0));
        let k = GradedModule::residue_field(a);
        assert_eq!(k.ext_against_ring(6).unwrap(), vec![0; 6]);
        let k3 = GradedModule::residue_field(r3());
        assert!(k3.ext_against_ring(1).unwrap()[0] > 0);
    }

    #[test]
    fn gdim_certificates() {
        let a = r2();
        let free = GradedModule::free(a.clone(), &FreeModule::new(vec![0]));
        assert!(free.gdim_zero_check(3).unwrap().passes());
        assert!(GradedModule::residue_field(a).gdim_zero_check(6).unwrap().passes());
        let cert = GradedModule::residue_field(r3()).gdim_zero_check(2).unwrap();
        assert!(!cert.passes());
        assert!(!cert.reflexive);
        assert_eq!(cert.failures()[..2], ["reflexivity".to_string(), "Ext^1(M,A)".to_string()]);
    }

    #[test]
    fn tensor_extension() {
        let a1 = r1();
        let free = GradedModule::free(a1.clone(), &FreeModule::new(vec![0]));
        let a2 = ring(&["y", "z"], &[&[(&[2, 0], 1)], &[(&[1, 1], 1)], &[(&[0, 2], 1)]]);
        let ext = free.tensor_extend(&a2).unwrap();
        assert_eq!(ext.dims(), BTreeMap::from([(0, 1), (1, 3), (2, 2)]));
        assert_eq!(ext.total_dim(), ext.algebra().dim());

        let k = GradedModule::residue_field(a1);
        let m = k.tensor_extend(&a2).unwrap();
        assert_eq!(m.dims(), BTreeMap::from([(0, 1), (1, 2)]));

        let lhs = k.dual().module.tensor_extend(&a2).unwrap();
        let rhs = m.dual().module;
        assert_eq!(lhs.dims(), rhs.dims());
    }

    #[test]
    fn zero_module_is_legal() {
        let z = GradedModule::zero(r2());
        assert!(z.dual().module.is_zero());
        assert!(z.minimal_generators().twists.is_empty());
        assert!(z.biduality_map().is_bijective());
        assert!(z.gdim_zero_check(2).unwrap().passes());
    }
}
