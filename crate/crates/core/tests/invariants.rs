//! Property tests for the structural invariants of each layer.

use proptest::prelude::*;
use rug::{Integer, Rational};

use hookpoly::asymptotics::main_term_large_w;
use hookpoly::numerics::{
    eval_at, lattice_counts, reduced_theta_coeffs, theta_lattice, theta_partition_form,
    PrecComplex, ThetaSpec,
};
use hookpoly::partitions::{
    brute_force_pt, enumerate_partitions, partition_numbers, DEFAULT_ENUMERATION_CAP,
};
use hookpoly::qseries::{expand_ht, expand_pab, pab_coefficient, RationalPair, WPolynomial};
use hookpoly::roots::{find_roots, reconstruction_relative_error, vieta_relative_error};

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(cfg(64))]

    #[test]
    fn hooks_of_partitions(n in 0u32..=20, pick in any::<prop::sample::Index>()) {
        let all: Vec<_> = enumerate_partitions(n).collect();
        prop_assert_eq!(Integer::from(all.len()), partition_numbers(n as usize)[n as usize].clone());
        let lambda = &all[pick.index(all.len())];
        let h = lambda.hook_numbers();
        prop_assert_eq!(h.len(), n as usize);
        prop_assert_eq!(lambda.count_t_hooks(1).unwrap(), n);
        prop_assert_eq!(h.sorted(), lambda.conjugate().hook_numbers().sorted());
    }

    #[test]
    fn brute_force_specialization_and_degree(t in 1u32..=30, n in 0u32..=30) {
        let p = brute_force_pt(t, n, DEFAULT_ENUMERATION_CAP).unwrap();
        prop_assert_eq!(p.eval_integer(&Integer::from(1)), partition_numbers(30)[n as usize].clone());
        if t <= n {
            prop_assert_eq!(p.degree(), Some(n / t));
        }
    }

    #[test]
    fn degree_law(t in 1u32..=10, n in 1usize..=300) {
        prop_assume!(t as usize <= n);
        let polys = expand_ht(t, n).unwrap();
        prop_assert_eq!(polys[n].degree(), Some(n as u32 / t));
    }

    #[test]
    fn superdistinct_counts(n in 1u32..=30) {
        let ab = RationalPair::new(Rational::from(1), Rational::from(0)).unwrap();
        let poly = pab_coefficient(&ab, &Rational::from(n)).unwrap();
        let mut counts = [0u32; 31];
        for lambda in enumerate_partitions(n) {
            if lambda.is_superdistinct() {
                counts[lambda.len()] += 1;
            }
        }
        for (m, c) in counts.iter().enumerate() {
            prop_assert_eq!(poly.coeff(m as u32), Integer::from(*c), "m = {}", m);
        }
    }

    #[test]
    fn integer_pab_is_plain_series(a in 1i64..=3, b in 0i64..=2) {
        let nmax = 40usize;
        let ab = RationalPair::new(Rational::from(a), Rational::from(b)).unwrap();
        let s = expand_pab(&ab, &Rational::from(nmax), None).unwrap();
        prop_assert_eq!(s.delta(), 1);
        // ∑_m w^m q^{am²+bm} / (q;q)_m by direct series arithmetic.
        let mut want = vec![WPolynomial::zero(); nmax + 1];
        let mut m = 0i64;
        while a * m * m + b * m <= nmax as i64 {
            let mut ser = vec![Integer::new(); nmax + 1];
            ser[(a * m * m + b * m) as usize] = Integer::from(1);
            for k in 1..=m as usize {
                for i in k..=nmax {
                    let prev = ser[i - k].clone();
                    ser[i] += prev;
                }
            }
            for (i, c) in ser.into_iter().enumerate() {
                if c != 0 {
                    want[i].add_shifted(&WPolynomial::constant(c), m as u32, false);
                }
            }
            m += 1;
        }
        for (i, w) in want.iter().enumerate() {
            prop_assert_eq!(s.coeff_at(i).cloned().unwrap_or_else(WPolynomial::zero), w.clone(), "q^{}", i);
        }
    }
}

proptest! {
    #![proptest_config(cfg(24))]

    #[test]
    fn lattice_and_partition_coefficients_agree(t in 1u32..=7, ell_seed in 0u32..7, jmax in 1usize..=30) {
        let ell = ell_seed % t;
        let spec = ThetaSpec::new(t, ell).unwrap();
        let counts = lattice_counts(t, ell as usize + t as usize * jmax);
        let coeffs = reduced_theta_coeffs(spec, jmax);
        for (j, c) in coeffs.iter().enumerate() {
            prop_assert_eq!(c.clone(), Integer::from(counts[ell as usize + t as usize * j]), "j = {}", j);
        }
    }

    #[test]
    fn theta_identity_at_random_points(t in 2u32..=7, ell_seed in 0u32..7, r in 0.0f64..0.7, a in -std::f64::consts::PI..std::f64::consts::PI) {
        let spec = ThetaSpec::new(t, ell_seed % t).unwrap();
        let z = PrecComplex::from_f64(r * a.cos(), r * a.sin(), 128);
        let l = theta_lattice(spec, &z, 1e-22).unwrap();
        let p = theta_partition_form(spec, &z, 1e-22).unwrap();
        prop_assert!(l.agrees_with(&p), "{} vs {}", l, p);
        prop_assert!(l.err_f64() + p.err_f64() < 1e-20);
    }

    #[test]
    fn singular_series_is_real_for_real_w(t in 6u32..=8, n in 0u64..=200, w in 0.0f64..=0.05) {
        let v = eval_at(t, &PrecComplex::from_f64(w, 0.0, 128), n, 0.2).unwrap();
        prop_assert!(v.im_f64().abs() <= v.err_f64());
    }

    #[test]
    fn large_w_modulus_is_conjugation_invariant(k in 60u64..=150, re in 1.5f64..4.0, im in -2.0f64..2.0) {
        let n = 7 * k + 5;
        let w = PrecComplex::from_f64(re, im, 128);
        let a = main_term_large_w(7, 5, n, &w, 1e-25).unwrap();
        let b = main_term_large_w(7, 5, n, &w.conj(), 1e-25).unwrap();
        let rel = (a.modulus.to_f64() / b.modulus.to_f64() - 1.0).abs();
        prop_assert!(rel < 1e-20);
    }

    #[test]
    fn root_sets_are_certified(coeffs in prop::collection::vec(-1000i64..=1000, 2..=24), seed in 0.0f64..std::f64::consts::TAU) {
        let p = WPolynomial::from_i64s(&coeffs);
        prop_assume!(p.degree().unwrap_or(0) >= 1);
        let rs = find_roots(&p, 128, 1e-25).unwrap();
        let again = find_roots(&p, 128, 1e-25).unwrap();
        prop_assert_eq!(&rs.roots, &again.roots);
        prop_assert_eq!(rs.roots.len() as u32 + rs.zero_multiplicity, rs.degree);
        prop_assert!(vieta_relative_error(&p, &rs) < 1e-10);
        let pts: Vec<PrecComplex> = (0..8)
            .map(|j| {
                let a = seed + j as f64 * std::f64::consts::TAU / 8.0;
                PrecComplex::from_f64(2.0 * a.cos(), 2.0 * a.sin(), 256)
            })
            .collect();
        prop_assert!(reconstruction_relative_error(&p, &rs, &pts) < 1e-10);
        for r in &rs.roots {
            let c = r.conj();
            prop_assert!(rs.roots.iter().any(|s| s.distance(&c) <= 1e-20 * (1.0 + r.abs_f64())));
        }
    }
}
