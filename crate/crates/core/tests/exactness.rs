use std::sync::Arc;

use proptest::prelude::*;

use symgrowth::algebra::{GradedAlgebra, Polynomial};
use symgrowth::cli::run::{build_module, build_ring};
use symgrowth::complex::{complete_resolution, minimal_resolution, FreeComplex};
use symgrowth::fixtures::standard_fixtures;
use symgrowth::module::GradedModule;
use symgrowth::{Field, Gf32003 as F};

fn assert_exact(c: &FreeComplex<F>, what: &str) {
    assert_eq!(c.d_squared_failure(), None, "{what}: d^2");
    assert!(c.exactness_failures().is_empty(), "{what}: not exact at {:?}", c.exactness_failures());
}

fn ring(name: &str) -> Arc<GradedAlgebra<F>> {
    let f = standard_fixtures().into_iter().find(|f| f.name == name).unwrap();
    build_ring::<F>(&f.job.ring).unwrap()
}

#[test]
fn fixtures_and_duals() {
    for f in standard_fixtures() {
        let alg = build_ring::<F>(&f.job.ring).unwrap();
        let m = build_module(&alg, &f.job.module).unwrap();
        assert_exact(minimal_resolution(&m, 6).unwrap().complex(), f.name);
        if f.expect.gdim_zero {
            let res = complete_resolution(&m, 6).unwrap();
            assert_exact(&res.complex, f.name);
            assert_exact(&res.complex.dualize(), f.name);
            assert!(res.splice_image_matches(), "{}", f.name);
        }
    }
}

/// `A / (a x + b y)` for a linear form over `k[x,y]/(x^2,y^2)` or the
/// non-Gorenstein `k[x,y]/(x^2,xy,y^2)`.
fn cyclic(alg: &Arc<GradedAlgebra<F>>, a: i64, b: i64, shift: i32) -> GradedModule<F> {
    let n = alg.nvars();
    let form = Polynomial::var(n, 0).scale(F::from_i64(a)).add(&Polynomial::var(n, 1).scale(F::from_i64(b)));
    GradedModule::from_presentation(alg.clone(), vec![shift], vec![shift + 1], &[vec![form]]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn resolutions_of_cyclic_modules(a in -5i64..5, b in -5i64..5, shift in -2i32..3, gorenstein in any::<bool>()) {
        prop_assume!(a != 0 || b != 0);
        let alg = ring(if gorenstein { "r2" } else { "r3" });
        let m = cyclic(&alg, a, b, shift);
        assert_exact(minimal_resolution(&m, 5).unwrap().complex(), "resolution");
        if let Ok(res) = complete_resolution(&m, 5) {
            assert_exact(&res.complex, "complete");
            assert_exact(&res.complex.dualize(), "dual");
        }
    }

    #[test]
    fn twisted_fixtures(idx in 0usize..6, shift in -3i32..4, steps in 3usize..7) {
        let f = &standard_fixtures()[idx];
        let alg = build_ring::<F>(&f.job.ring).unwrap();
        let m = build_module(&alg, &f.job.module).unwrap().twist(shift);
        let res = minimal_resolution(&m, steps).unwrap();
        prop_assert_eq!(res.betti().len(), steps + 1);
        assert_exact(res.complex(), f.name);
        if f.expect.gdim_zero {
            let c = complete_resolution(&m, steps).unwrap().complex;
            assert_exact(&c, f.name);
            assert_exact(&c.dualize(), f.name);
        }
    }
}
