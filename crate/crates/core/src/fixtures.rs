//! Standard rings and modules, and the tensor construction over a non-CI
//! second factor.

use std::sync::Arc;

use crate::algebra::GradedAlgebra;
use crate::cli::job::{parse_job, JobSpec};
use crate::complex::minimal_resolution;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::growth::{Cx, Verdict};
use crate::module::GradedModule;

/// What a fixture is expected to show, with the argument behind each value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expectation {
    pub gdim_zero: bool,
    pub cx_plus: Cx,
    /// `None` when there is no complete resolution.
    pub cx_minus: Option<Cx>,
    pub symmetric: Verdict,
    pub ci: bool,
    pub oracle: &'static str,
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    pub job: JobSpec,
    pub expect: Expectation,
}

const SOURCES: [(&str, &str, &str); 6] = [
    (
        "r1",
        "k over k[x]/(x^2)",
        "ring{p=32003; vars=x; rels=x^2}\nmodule{rows=[0]; cols=[1]; entries=[[x]]}",
    ),
    (
        "r2",
        "k over k[x,y]/(x^2,y^2)",
        "ring{p=32003; vars=x,y; rels=x^2,y^2}\nmodule{rows=[0]; cols=[1,1]; entries=[[x,y]]}",
    ),
    (
        "r2-omega",
        "the maximal ideal of k[x,y]/(x^2,y^2)",
        "ring{p=32003; vars=x,y; rels=x^2,y^2}\nmodule{rows=[1,1]; cols=[2,2,2]; entries=[[x,0,y],[0,y,-x]]}",
    ),
    (
        "r3",
        "k over k[x,y]/(x^2,xy,y^2)",
        "ring{p=32003; vars=x,y; rels=x^2,xy,y^2}\nmodule{rows=[0]; cols=[1,1]; entries=[[x,y]]}",
    ),
    (
        "r4",
        "k[y,z]/(y^2,yz,z^2) extended from k over k[x]/(x^2)",
        "ring{p=32003; vars=x,y,z; rels=x^2,y^2,yz,z^2}\nmodule{rows=[0]; cols=[1]; entries=[[x]]}",
    ),
    (
        "r5",
        "k over k[x]/(x^3)",
        "ring{p=32003; vars=x; rels=x^3}\nmodule{rows=[0]; cols=[1]; entries=[[x]]}",
    ),
];

fn expectation(name: &str) -> Expectation {
    let finite = |c| Expectation {
        gdim_zero: true,
        cx_plus: Cx::Finite(c),
        cx_minus: Some(Cx::Finite(c)),
        symmetric: Verdict::Yes,
        ci: true,
        oracle: "",
    };
    match name {
        "r1" => Expectation {
            oracle: "resolution is multiplication by x in every degree",
            ..finite(1)
        },
        "r2" => Expectation {
            oracle: "tensor product of two periodic resolutions: beta_n = n+1",
            ..finite(2)
        },
        "r2-omega" => Expectation {
            oracle: "syzygy shifts the table of k by one",
            ..finite(2)
        },
        "r3" => Expectation {
            gdim_zero: false,
            cx_plus: Cx::Exponential,
            cx_minus: None,
            symmetric: Verdict::Inconclusive,
            ci: false,
            oracle: "m^2 = 0, so each syzygy is a sum of two copies of the last: beta_n = 2^n",
        },
        "r4" => Expectation {
            ci: false,
            oracle: "annihilator of x is (x): the resolution of A/(x) is periodic of rank 1",
            ..finite(1)
        },
        "r5" => Expectation {
            oracle: "differentials alternate x and x^2",
            ..finite(1)
        },
        _ => unreachable!("unknown fixture"),
    }
}

/// Every fixture, ordered by name, with `cmd=symgrowth`.
pub fn standard_fixtures() -> Vec<Fixture> {
    SOURCES
        .iter()
        .map(|&(name, description, text)| Fixture {
            name,
            description,
            job: parse_job(text).expect("fixture text parses"),
            expect: expectation(name),
        })
        .collect()
}

pub fn fixture(name: &str) -> Option<Fixture> {
    standard_fixtures().into_iter().find(|f| f.name == name)
}

pub fn fixture_names() -> Vec<&'static str> {
    SOURCES.iter().map(|s| s.0).collect()
}

/// `A = A1 (x) A2` with `M = M1 (x) A2`.
#[derive(Clone, Debug)]
pub struct Construction<F: PrimeField> {
    pub algebra: Arc<GradedAlgebra<F>>,
    pub module: GradedModule<F>,
    /// `dim (M*)_d = dim ((M1*) (x) A2)_d` for every `d`.
    pub dual_compatible: bool,
    /// `β_n^A(M) = β_n^{A1}(M1)` for `n <= steps`.
    pub betti_preserved: bool,
    pub betti: Vec<usize>,
}

pub fn construction_instance<F: PrimeField>(
    m1: &GradedModule<F>,
    a2: &GradedAlgebra<F>,
    steps: usize,
) -> Result<Construction<F>> {
    let a1 = m1.algebra();
    if a1.verify_ci().is_none() {
        return Err(Error::Precondition("first factor is not a certified complete intersection".into()));
    }
    let cert = m1.gdim_zero_check(steps.max(1))?;
    if !cert.passes() {
        return Err(Error::NotTotallyReflexive(cert.failures().join(", ")));
    }
    let module = m1.tensor_extend(a2)?;
    let algebra = module.algebra().clone();

    let dual = module.dual().module;
    let dual1 = m1.dual().module;
    let h2 = a2.hilbert_function();
    let lo = dual.lo().min(dual1.lo());
    let hi = dual.hi().max(dual1.hi() + h2.len() as i32);
    let dual_compatible = (lo..=hi).all(|d| {
        let expected: usize = h2
            .iter()
            .enumerate()
            .map(|(j, &h)| h * dual1.dim(d - j as i32))
            .sum();
        dual.dim(d) == expected
    });

    let betti = minimal_resolution(&module, steps)?.betti();
    let betti_preserved = betti == minimal_resolution(m1, steps)?.betti();
    Ok(Construction {
        algebra,
        module,
        dual_compatible,
        betti_preserved,
        betti,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Monomial, Polynomial};
    use crate::field::Fp;

    type F = Fp<32003>;

    #[test]
    fn fixtures_round_trip() {
        for f in standard_fixtures() {
            let text = f.job.to_string();
            assert_eq!(parse_job(&text).unwrap(), f.job, "{}", f.name);
        }
        assert_eq!(fixture_names(), vec!["r1", "r2", "r2-omega", "r3", "r4", "r5"]);
    }

    fn algebra(names: &[&str], rels: &[&[u32]]) -> Arc<GradedAlgebra<F>> {
        let relations = rels
            .iter()
            .map(|e| Polynomial::term(Monomial(e.to_vec()), F::new(1)))
            .collect();
        Arc::new(GradedAlgebra::new(names.iter().map(|s| s.to_string()).collect(), relations, None).unwrap())
    }

    #[test]
    fn construction() {
        let a1 = algebra(&["x"], &[&[2]]);
        let a2 = algebra(&["y", "z"], &[&[2, 0], &[1, 1], &[0, 2]]);
        let c = construction_instance(&GradedModule::residue_field(a1.clone()), &a2, 6).unwrap();
        assert!(c.dual_compatible && c.betti_preserved);
        assert_eq!(c.betti, vec![1; 7]);
        assert!(c.algebra.verify_ci().is_none());

        // the unit factor gives back the input
        let unit = algebra(&[], &[]);
        let c = construction_instance(&GradedModule::residue_field(a1.clone()), &unit, 4).unwrap();
        assert_eq!(c.module.dims(), GradedModule::residue_field(a1.clone()).dims());

        // a free module stays free
        let free = GradedModule::free(a1.clone(), &crate::free::FreeModule::new(vec![0]));
        let c = construction_instance(&free, &a2, 4).unwrap();
        assert_eq!(c.betti, vec![1, 0, 0, 0, 0]);
    }
}
