use floquet_pt_core::bloch;
use floquet_pt_core::coefficients::{build_spec, OperatorSpec, RawHarmonic, RawSeries};
use floquet_pt_core::monodromy::{
    fundamental_matrix, multipliers, refine_bloch_eigenvalue, MonodromyOptions,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn entries(rows: &[&[f64]]) -> Vec<Vec<Complex64>> {
    rows.iter().map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect()
}

fn cosine_quartic() -> OperatorSpec {
    let raw = vec![RawSeries {
        order: 2,
        harmonics: vec![
            RawHarmonic { frequency: 1, entries: entries(&[&[1.0]]) },
            RawHarmonic { frequency: -1, entries: entries(&[&[1.0]]) },
        ],
    }];
    build_spec(4, 1, raw, 1.0).unwrap()
}

fn coupled_cubic() -> OperatorSpec {
    let raw = vec![RawSeries {
        order: 2,
        harmonics: vec![
            RawHarmonic { frequency: 0, entries: entries(&[&[0.0, 0.0], &[0.0, 2.0]]) },
            RawHarmonic { frequency: 1, entries: entries(&[&[0.0, 0.5], &[0.5, 0.0]]) },
            RawHarmonic { frequency: -1, entries: entries(&[&[0.0, 0.5], &[0.5, 0.0]]) },
        ],
    }];
    build_spec(3, 2, raw, 1.0).unwrap()
}

#[test]
fn liouville_identity_random_lambdas() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x11ab);
    let opts = MonodromyOptions { ode_tol: 1e-12, ..Default::default() };
    for spec in [cosine_quartic(), coupled_cubic()] {
        for _ in 0..25 {
            let lambda =
                Complex64::new(rng.gen_range(-2e3..2e3), rng.gen_range(-20.0..20.0));
            let rec = fundamental_matrix(&spec, lambda, &opts).unwrap();
            let defect = (rec.det - Complex64::new(1.0, 0.0)).norm();
            assert!(defect <= 1e-8, "det defect {defect} at lambda {lambda}");
            // multipliers multiply to the determinant
            let prod: Complex64 = rec.multipliers.iter().product();
            assert!((prod - rec.det).norm() <= 1e-6 * (1.0 + prod.norm()));
        }
    }
}

// For even n with only even-order coefficients the operator has real
// coefficient phases, so M(conj λ) = conj M(λ) and the multiplier multiset
// conjugates. For odd n the phases are complex and the PT reflection
// w(x) = conj(y(−x)) sends a ρ-Floquet solution to a 1/conj(ρ) one instead;
// on the unit circle both identities coincide, which is all the eigenvalue
// symmetry requires.
#[test]
fn conjugation_symmetry_of_multipliers() {
    let opts = MonodromyOptions::default();

    // even n: conjugate multiset
    let spec = cosine_quartic();
    for &lam in &[Complex64::new(40.0, 3.0), Complex64::new(500.0, -20.0)] {
        let a = multipliers(&spec, lam, &opts).unwrap();
        let b = multipliers(&spec, lam.conj(), &opts).unwrap();
        // two independent integrations: their error realizations differ at
        // the scale of the monodromy norm, not of each multiplier
        let scale = a.iter().map(|r| r.norm()).fold(1.0, f64::max);
        for rho in &a {
            let best =
                b.iter().map(|s| (s - rho.conj()).norm()).fold(f64::INFINITY, f64::min);
            assert!(best <= 1e-8 * (1.0 + scale), "unmatched multiplier {rho} (best {best})");
        }
    }

    // odd n: multipliers reflect through the unit circle
    let spec = coupled_cubic();
    for &lam in &[Complex64::new(40.0, 3.0), Complex64::new(300.0, -11.0)] {
        let a = multipliers(&spec, lam, &opts).unwrap();
        let b = multipliers(&spec, lam.conj(), &opts).unwrap();
        let scale = a.iter().map(|r| r.norm()).fold(1.0, f64::max);
        for rho in &a {
            let target = Complex64::new(1.0, 0.0) / rho.conj();
            let best = b.iter().map(|s| (s - target).norm()).fold(f64::INFINITY, f64::min);
            assert!(
                best <= 1e-7 * (1.0 + scale),
                "multiplier {rho} has no unit-circle reflection (best {best})"
            );
        }
    }
}

#[test]
fn oracle_equivalence_on_moderate_window() {
    // galerkin values refined through the characteristic determinant move by
    // less than 1e-6
    let spec = cosine_quartic();
    let opts = MonodromyOptions::default();
    let t = 0.7;
    let vals = bloch::galerkin_eigenvalues(&spec, t, 16).unwrap();
    let mut checked = 0;
    for z in vals {
        if z.re < -50.0 || z.re > 25_000.0 || z.im.abs() > 50.0 {
            continue;
        }
        let refined = refine_bloch_eigenvalue(&spec, t, z, &opts).unwrap();
        assert!(
            (refined - z).norm() <= 1e-6,
            "galerkin {z} vs refined {refined}"
        );
        checked += 1;
    }
    assert!(checked >= 4, "only {checked} eigenvalues in window");
}
