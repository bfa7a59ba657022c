use szilard_lab::spectral::{
    classify_stability, conversion_table, solve, InversionTime, Stability, StabilityThresholds, WellSpec,
};

/// Reference wells for grid convergence: a tunnelling and a deeper
/// symmetric double well, and a tilted one.
fn reference_wells(n: usize) -> Vec<WellSpec> {
    vec![
        WellSpec::double_well(1.0, 3.0, 0.0, 1.0, 4.5, n),
        WellSpec::double_well(1.0, 5.0, 0.0, 1.0, 4.5, n),
        WellSpec::double_well(1.0, 3.0, 0.2, 1.0, 4.5, n),
    ]
}

#[test]
fn doubling_the_grid_moves_low_levels_little() {
    for (coarse, fine) in reference_wells(1500).into_iter().zip(reference_wells(3000)) {
        let a = solve(&coarse).unwrap();
        let b = solve(&fine).unwrap();
        for k in 0..2 {
            let rel = ((a.energies[k] - b.energies[k]) / b.energies[k].abs().max(1e-3)).abs();
            assert!(rel < 1e-4, "{:?} level {k}: {rel:.2e}", coarse.potential);
        }
    }
}

#[test]
fn residual_and_orthonormality_on_every_reference_solve() {
    for spec in reference_wells(1500) {
        let s = solve(&spec).unwrap();
        assert!(s.max_residual < 1e-6);
        assert!(s.orthonormality_error() < 1e-10, "{:e}", s.orthonormality_error());
    }
}

#[test]
fn localized_pair_reconstructs_eigenstates() {
    let s = solve(&WellSpec::double_well(1.0, 3.0, 0.0, 1.0, 4.5, 1500)).unwrap();
    let pair = s.localized_states().unwrap();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut worst: f64 = 0.0;
    for i in 0..s.x.len() {
        let even = r * (pair.left[i] + pair.right[i]);
        let odd = r * (pair.right[i] - pair.left[i]);
        worst = worst.max((even - s.states[0][i]).abs()).max((odd.abs() - s.states[1][i].abs()).abs());
    }
    assert!(worst < 1e-10, "{worst:e}");
    assert!(pair.left_mean < 0.0 && pair.right_mean > 0.0);

    let eq = s.equilibrium_state().unwrap();
    assert!((eq.entropy - std::f64::consts::LN_2).abs() < 1e-12);
    assert!(eq.decomposition_gap < 1e-10);
}

#[test]
fn splitting_shrinks_with_barrier() {
    let mut last = f64::INFINITY;
    for b in [2.0, 3.0, 4.0, 5.0] {
        let s = solve(&WellSpec::double_well(1.0, b, 0.0, 1.0, 4.5, 1500)).unwrap();
        assert!(s.splitting() < last);
        last = s.splitting();
    }
}

#[test]
fn presets_land_in_opposite_regimes() {
    let th = StabilityThresholds::default();
    let table = conversion_table();
    let mut seen = Vec::new();
    for p in &table {
        let s = solve(&p.spec).unwrap();
        assert!(matches!(s.inversion_time(), InversionTime::Resolved(_) | InversionTime::AtLeast(_)));
        seen.push(classify_stability(p.tau_inv_s, p.tau_relax_s, p.tau_obs_s, th).unwrap());
    }
    assert_eq!(seen, vec![Stability::ThermodynamicEntropy, Stability::InformationEntropy]);
}
