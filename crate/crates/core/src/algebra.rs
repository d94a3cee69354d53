//! Standard-graded Artinian quotients `A = k[x_1..x_n] / I`.
//!
//! `A` is realized degree by degree: `I_d` is spanned inside the monomial
//! space `k[x]_d`, and the monomials at the non-pivot columns of its echelon
//! form (graded lexicographic order, `x_1 > x_2 > ...`) are the basis of
//! `A_d`. No Gröbner basis is ever formed.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::Range;


use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::linalg::{Matrix, Quotient, Subspace};

/// Exponent vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Variable indices with multiplicity, in increasing order.
    pub fn factors(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree());
        for (i, &e) in self.0.iter().enumerate() {
            out.extend(std::iter::repeat_n(i, e as usize));
        }
        out
    }

    pub fn format(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(names[i].clone()),
                _ => parts.push(format!("{}^{}", names[i], e)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// All monomials of degree `d` in `n` variables, largest first in graded
/// lexicographic order.
pub fn monomials(n: usize, d: usize) -> Vec<Monomial> {
    fn go(n: usize, d: usize, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == n {
            prefix.push(d as u32);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e as u32);
            go(n, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Monomial(vec![]));
        }
        return out;
    }
    go(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Polynomial in `k[x_1..x_n]`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial<F> {
    nvars: usize,
    terms: BTreeMap<Monomial, F>,
}

impl<F: PrimeField> Polynomial<F> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn term(m: Monomial, c: F) -> Self {
        let mut p = Self::zero(m.nvars());
        p.add_term(m, c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(Monomial::var(nvars, i), F::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> F {
        self.terms.get(m).copied().unwrap_or_else(F::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: F) {
        assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(F::zero);
        *entry = *entry + c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-F::one()))
    }

    pub fn scale(&self, c: F) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), *v * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), *c1 * *c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.nvars, F::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Common degree of all terms, or `None` if inhomogeneous. The zero
    /// polynomial is homogeneous of every degree and reports `Some(0)`.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(Monomial::degree);
        match it.next() {
            None => Some(0),
            Some(d) => it.all(|e| e == d).then_some(d),
        }
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Component of degree `d`.
    pub fn component(&self, d: usize) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), *c))
                .collect(),
        }
    }

    /// Re-embeds into `total` variables, placing ours at `offset..`.
    pub fn embed(&self, total: usize, offset: usize) -> Self {
        let mut out = Self::zero(total);
        for (m, c) in &self.terms {
            let mut e = vec![0; total];
            e[offset..offset + self.nvars].copy_from_slice(&m.0);
            out.add_term(Monomial(e), *c);
        }
        out
    }

    pub fn format(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        // largest monomial first
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let v = c.signed();
            let (sign, mag) = if v < 0 { ("-", -v) } else { ("+", v) };
            if i == 0 {
                if sign == "-" {
                    s.push('-');
                }
            } else {
                s.push_str(sign);
            }
            let mono = m.format(names);
            if mono == "1" {
                s.push_str(&mag.to_string());
            } else if mag == 1 {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{mag}*{mono}"));
            }
        }
        s
    }
}

impl<F: PrimeField> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.format(&names))
    }
}

/// Element of `A`, as coordinates in the concatenated degree bases.
pub type RingElem<F> = Vec<F>;

/// `k[x_1..x_n] / I`, Artinian and standard graded.
#[derive(Clone, Debug)]
pub struct GradedAlgebra<F: PrimeField> {
    names: Vec<String>,
    relations: Vec<Polynomial<F>>,
    top: usize,
    monomials: Vec<Vec<Monomial>>,
    monomial_index: Vec<HashMap<Monomial, usize>>,
    reduction: Vec<Quotient<F>>,
    basis: Vec<Vec<Monomial>>,
    offsets: Vec<usize>,
    dim: usize,
    // products[i * dim + j] = b_i * b_j, sparse
    products: Vec<Vec<(usize, F)>>,
    // var_action[i][d] : A_d -> A_{d+1}
    var_action: Vec<Vec<Matrix<F>>>,
}

/// Certificate that `A = k[x_1..x_n] / (f_1..f_n)` with `f` a regular
/// sequence.
#[derive(Clone, Debug)]
pub struct CiStructure<F: PrimeField> {
    pub nvars: usize,
    pub relations: Vec<Polynomial<F>>,
    pub degrees: Vec<usize>,
    pub socle_degree: usize,
}

impl<F: PrimeField> GradedAlgebra<F> {
    /// Default degree cap: `sum(deg f) + 2` when there are at least as many
    /// relations as variables, otherwise 20.
    pub fn default_cap(nvars: usize, relations: &[Polynomial<F>]) -> usize {
        if relations.len() >= nvars {
            relations.iter().map(|f| f.max_degree()).sum::<usize>() + 2
        } else {
            20
        }
    }

    pub fn new(names: Vec<String>, relations: Vec<Polynomial<F>>, cap: Option<usize>) -> Result<Self> {
        let n = names.len();
        for f in &relations {
            if f.nvars() != n {
                return Err(Error::InvalidInput(format!(
                    "relation has {} variables, ring has {}",
                    f.nvars(),
                    n
                )));
            }
            match f.homogeneous_degree() {
                None => {
                    return Err(Error::NotHomogeneous(f.format(&names)));
                }
                Some(d) if d < 2 && !f.is_zero() => {
                    return Err(Error::InvalidInput(format!(
                        "relation {} has degree {d}; relations must have degree >= 2",
                        f.format(&names)
                    )));
                }
                _ => {}
            }
        }
        let relations: Vec<_> = relations.into_iter().filter(|f| !f.is_zero()).collect();
        let cap = cap.unwrap_or_else(|| Self::default_cap(n, &relations)).max(1);

        let mut monos = Vec::new();
        let mut index = Vec::new();
        let mut reduction: Vec<Quotient<F>> = Vec::new();
        let mut ideal_prev: Option<Subspace<F>> = None;
        let mut top = None;
        for d in 0..=cap + 1 {
            let md = monomials(n, d);
            let idx: HashMap<Monomial, usize> = md.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
            let mut ideal = Subspace::new(md.len());
            if let Some(prev) = &ideal_prev {
                let prev_monos: &Vec<Monomial> = &monos[d - 1];
                for row in prev.basis() {
                    for i in 0..n {
                        let mut v = vec![F::zero(); md.len()];
                        for (k, c) in row.iter().enumerate() {
                            if !c.is_zero() {
                                let m = prev_monos[k].mul(&Monomial::var(n, i));
                                v[idx[&m]] = v[idx[&m]] + *c;
                            }
                        }
                        ideal.insert(&v);
                    }
                }
            }
            for f in relations.iter().filter(|f| f.max_degree() == d) {
                let mut v = vec![F::zero(); md.len()];
                for (m, c) in f.terms() {
                    v[idx[m]] = *c;
                }
                ideal.insert(&v);
            }
            let q = Quotient::new(ideal.clone());
            let empty = q.dim() == 0;
            monos.push(md);
            index.push(idx);
            reduction.push(q);
            ideal_prev = Some(ideal);
            if empty {
                top = Some(d - 1);
                break;
            }
        }
        let Some(top) = top else {
            return Err(Error::NotArtinian { cap });
        };

        let basis: Vec<Vec<Monomial>> = (0..=top)
            .map(|d| reduction[d].complement().iter().map(|&i| monos[d][i].clone()).collect())
            .collect();
        let mut offsets = Vec::with_capacity(top + 2);
        let mut acc = 0;
        for b in &basis {
            offsets.push(acc);
            acc += b.len();
        }
        offsets.push(acc);

        let mut alg = GradedAlgebra {
            names,
            relations,
            top,
            monomials: monos,
            monomial_index: index,
            reduction,
            basis,
            offsets,
            dim: acc,
            products: Vec::new(),
            var_action: Vec::new(),
        };
        alg.products = alg.build_products();
        alg.var_action = (0..n)
            .map(|i| (0..=top).map(|d| alg.build_var_action(i, d)).collect())
            .collect();
        Ok(alg)
    }

    /// Normal form of a homogeneous monomial, as a vector over `A_d`.
    fn monomial_nf(&self, m: &Monomial) -> Vec<F> {
        let d = m.degree();
        if d > self.top {
            return Vec::new();
        }
        let mut v = vec![F::zero(); self.monomials[d].len()];
        v[self.monomial_index[d][m]] = F::one();
        self.reduction[d].project(&v)
    }

    fn build_products(&self) -> Vec<Vec<(usize, F)>> {
        let mut out = Vec::with_capacity(self.dim * self.dim);
        let all: Vec<&Monomial> = self.basis.iter().flatten().collect();
        for a in &all {
            for b in &all {
                let m = a.mul(b);
                let d = m.degree();
                let nf = self.monomial_nf(&m);
                let off = if d <= self.top { self.offsets[d] } else { 0 };
                out.push(
                    nf.into_iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(k, c)| (off + k, c))
                        .collect(),
                );
            }
        }
        out
    }

    fn build_var_action(&self, i: usize, d: usize) -> Matrix<F> {
        let src = self.dim_in_degree(d);
        let tgt = self.dim_in_degree(d + 1);
        let mut m = Matrix::zeros(tgt, src);
        if tgt == 0 {
            return m;
        }
        for (j, b) in self.basis[d].iter().enumerate() {
            let nf = self.monomial_nf(&b.mul(&Monomial::var(self.nvars(), i)));
            for (r, c) in nf.into_iter().enumerate() {
                m[(r, j)] = c;
            }
        }
        m
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relations(&self) -> &[Polynomial<F>] {
        &self.relations
    }

    /// Socle degree: largest `d` with `A_d != 0`.
    pub fn top(&self) -> usize {
        self.top
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn dim_in_degree(&self, d: usize) -> usize {
        if d > self.top {
            0
        } else {
            self.basis[d].len()
        }
    }

    pub fn dim_at(&self, d: i32) -> usize {
        if d < 0 {
            0
        } else {
            self.dim_in_degree(d as usize)
        }
    }

    pub fn hilbert_function(&self) -> Vec<usize> {
        self.basis.iter().map(Vec::len).collect()
    }

    pub fn basis(&self, d: usize) -> &[Monomial] {
        if d > self.top {
            &[]
        } else {
            &self.basis[d]
        }
    }

    pub fn basis_at(&self, d: i32) -> &[Monomial] {
        if d < 0 {
            &[]
        } else {
            self.basis(d as usize)
        }
    }

    /// Index range of `A_d` inside the concatenated basis.
    pub fn degree_range(&self, d: i32) -> Range<usize> {
        if d < 0 || d as usize > self.top {
            0..0
        } else {
            self.offsets[d as usize]..self.offsets[d as usize + 1]
        }
    }

    /// Degree and monomial of a basis index.
    pub fn basis_element(&self, idx: usize) -> (usize, &Monomial) {
        let d = self.offsets.partition_point(|&o| o <= idx) - 1;
        (d, &self.basis[d][idx - self.offsets[d]])
    }

    /// Matrix of multiplication by `x_i` from `A_d` to `A_{d+1}`.
    pub fn var_action(&self, i: usize, d: i32) -> Matrix<F> {
        if d < 0 || d as usize > self.top {
            return Matrix::zeros(self.dim_at(d + 1), self.dim_at(d));
        }
        self.var_action[i][d as usize].clone()
    }

    pub fn zero_elem(&self) -> RingElem<F> {
        vec![F::zero(); self.dim]
    }

    pub fn one_elem(&self) -> RingElem<F> {
        let mut v = self.zero_elem();
        v[0] = F::one();
        v
    }

    /// Element of `A` from a degree piece vector.
    pub fn elem_from_piece(&self, d: i32, v: &[F]) -> RingElem<F> {
        let mut e = self.zero_elem();
        let r = self.degree_range(d);
        assert_eq!(v.len(), r.len());
        e[r].copy_from_slice(v);
        e
    }

    pub fn piece(&self, a: &RingElem<F>, d: i32) -> Vec<F> {
        a[self.degree_range(d)].to_vec()
    }

    pub fn is_zero(&self, a: &RingElem<F>) -> bool {
        a.iter().all(|c| c.is_zero())
    }

    /// Coefficient of `1`, i.e. the image in `A / m = k`.
    pub fn constant_term(&self, a: &RingElem<F>) -> F {
        a.first().copied().unwrap_or_else(F::zero)
    }

    /// Degrees carrying a nonzero component.
    pub fn support_degrees(&self, a: &RingElem<F>) -> Vec<usize> {
        (0..=self.top)
            .filter(|&d| a[self.degree_range(d as i32)].iter().any(|c| !c.is_zero()))
            .collect()
    }

    pub fn add(&self, a: &RingElem<F>, b: &RingElem<F>) -> RingElem<F> {
        a.iter().zip(b).map(|(x, y)| *x + *y).collect()
    }

    pub fn sub(&self, a: &RingElem<F>, b: &RingElem<F>) -> RingElem<F> {
        a.iter().zip(b).map(|(x, y)| *x - *y).collect()
    }

    pub fn scale(&self, a: &RingElem<F>, c: F) -> RingElem<F> {
        a.iter().map(|x| *x * c).collect()
    }

    pub fn mul(&self, a: &RingElem<F>, b: &RingElem<F>) -> RingElem<F> {
        let mut out = self.zero_elem();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = *x * *y;
                for &(k, c) in &self.products[i * self.dim + j] {
                    out[k] = out[k] + xy * c;
                }
            }
        }
        out
    }

    /// Matrix of `v -> a * v` from `A_from` to `A_{from + shift}`, using only
    /// the component of `a` of degree `shift`.
    pub fn mul_matrix(&self, a: &RingElem<F>, from: i32, shift: i32) -> Matrix<F> {
        let to = from + shift;
        let src = self.degree_range(from);
        let tgt = self.degree_range(to);
        let mut m = Matrix::zeros(tgt.len(), src.len());
        if src.is_empty() || tgt.is_empty() {
            return m;
        }
        for i in self.degree_range(shift) {
            let x = a[i];
            if x.is_zero() {
                continue;
            }
            for (col, j) in src.clone().enumerate() {
                for &(k, c) in &self.products[i * self.dim + j] {
                    debug_assert!(tgt.contains(&k));
                    m[(k - tgt.start, col)] = m[(k - tgt.start, col)] + x * c;
                }
            }
        }
        m
    }

    /// Image of a polynomial in `A`.
    pub fn normal_form(&self, f: &Polynomial<F>) -> RingElem<F> {
        let mut out = self.zero_elem();
        for (m, c) in f.terms() {
            let d = m.degree();
            if d > self.top {
                continue;
            }
            let nf = self.monomial_nf(m);
            let off = self.offsets[d];
            for (k, v) in nf.into_iter().enumerate() {
                out[off + k] = out[off + k] + v * *c;
            }
        }
        out
    }

    /// Canonical lift of an element to `k[x]`: each basis monomial lifts to
    /// itself.
    pub fn lift(&self, a: &RingElem<F>) -> Polynomial<F> {
        let mut p = Polynomial::zero(self.nvars());
        for (i, c) in a.iter().enumerate() {
            if !c.is_zero() {
                p.add_term(self.basis_element(i).1.clone(), *c);
            }
        }
        p
    }

    pub fn format_elem(&self, a: &RingElem<F>) -> String {
        self.lift(a).format(&self.names)
    }

    /// Certifies `A` as a complete intersection when it is presented by
    /// exactly `n` relations. Finite length then forces a regular sequence.
    pub fn verify_ci(&self) -> Option<CiStructure<F>> {
        if self.relations.len() != self.nvars() {
            return None;
        }
        let degrees: Vec<usize> = self.relations.iter().map(|f| f.max_degree()).collect();
        let socle_degree = degrees.iter().map(|d| d - 1).sum::<usize>();
        if socle_degree != self.top {
            return None;
        }
        // complete intersections are Gorenstein: symmetric Hilbert function
        let h = self.hilbert_function();
        if (0..=self.top).any(|d| h[d] != h[self.top - d]) {
            return None;
        }
        Some(CiStructure {
            nvars: self.nvars(),
            relations: self.relations.clone(),
            degrees,
            socle_degree,
        })
    }

    /// `A_1 (x) A_2` on the concatenated variables with the union of the
    /// relations. Clashing variable names from the right factor get a `_2`
    /// suffix.
    pub fn tensor(&self, other: &GradedAlgebra<F>) -> Result<GradedAlgebra<F>> {
        let n1 = self.nvars();
        let n = n1 + other.nvars();
        let mut names = self.names.clone();
        for name in &other.names {
            let mut candidate = name.clone();
            while names.contains(&candidate) {
                candidate.push_str("_2");
            }
            names.push(candidate);
        }
        let mut relations: Vec<_> = self.relations.iter().map(|f| f.embed(n, 0)).collect();
        relations.extend(other.relations.iter().map(|f| f.embed(n, n1)));
        GradedAlgebra::new(names, relations, Some(self.top + other.top + 2))
    }

    /// Spot-check that normal forms are multiplicative on basis monomials
    /// and that the variable actions commute.
    pub fn check_consistency(&self) -> bool {
        let all: Vec<(usize, Monomial)> = (0..self.dim)
            .map(|i| (i, self.basis_element(i).1.clone()))
            .collect();
        for (i, a) in &all {
            for (j, b) in &all {
                let direct = self.normal_form(&Polynomial::term(a.mul(b), F::one()));
                let mut ea = self.zero_elem();
                ea[*i] = F::one();
                let mut eb = self.zero_elem();
                eb[*j] = F::one();
                if direct != self.mul(&ea, &eb) {
                    return false;
                }
            }
        }
        for d in 0..=self.top as i32 {
            for i in 0..self.nvars() {
                for j in 0..self.nvars() {
                    let ij = self.var_action(i, d + 1).mul(&self.var_action(j, d));
                    let ji = self.var_action(j, d + 1).mul(&self.var_action(i, d));
                    if ij != ji {
                        return false;
                    }
                }
            }
        }
        true
    }
}
