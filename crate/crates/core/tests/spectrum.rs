use thetaflow::mathieu::*;

#[test]
fn edges_move_at_most_linearly_in_amplitude() {
    // dE/dA = ⟨cos γ⟩ lies in [−1, 1].
    let grid = linear_grid(0.0, 5.0, 41).unwrap();
    let da = grid[1] - grid[0];
    let bands: Vec<BandStructure> = grid
        .iter()
        .map(|&a| band_edges(&MathieuProblem::new(a, 32, 25.0).unwrap()).unwrap())
        .collect();
    for w in bands.windows(2) {
        let n = w[0].edges.len().min(w[1].edges.len()) - 2;
        for i in 0..n {
            let jump = (w[1].edges[i].e - w[0].edges[i].e).abs();
            assert!(
                jump <= da * (1.0 + 1e-9),
                "edge {i} jumps {jump} at A = {}",
                w[0].a
            );
        }
    }
}

#[test]
fn energy_two_meets_several_lacunae_in_amplitude() {
    let grid = linear_grid(0.0, 20.0, 401).unwrap();
    let hits = a_direction_scan(2.0, &grid, 32).unwrap();
    assert!(hits.len() >= 2, "{hits:?}");
    for w in hits.windows(2) {
        assert!(w[1].0 > w[0].1);
    }
}

#[test]
fn gap_midpoints_are_unstable() {
    for a in [0.5, 2.0, 5.0] {
        let b = band_edges(&MathieuProblem::new(a, 32, 12.0).unwrap()).unwrap();
        for g in b.gaps().iter().filter(|g| g.width > 1e-3) {
            let d = hill_discriminant(0.5 * (g.low + g.high), a).unwrap();
            assert!(d.abs() > 2.0, "A = {a}, gap {}: Δ = {d}", g.index);
        }
        for (lo, hi) in b.bands() {
            let d = hill_discriminant(0.5 * (lo + hi), a).unwrap();
            assert!(d.abs() < 2.0);
        }
    }
}

#[test]
fn chart_is_deterministic() {
    let grid = linear_grid(0.0, 2.0, 5).unwrap();
    let a = chart_csv(&band_chart(&grid, 10.0, 24).unwrap());
    let b = chart_csv(&band_chart(&grid, 10.0, 24).unwrap());
    assert_eq!(a, b);
    let free_rows: Vec<&str> = a
        .lines()
        .filter(|l| l.starts_with("0.0000000000000000e0,"))
        .collect();
    assert!(!free_rows.is_empty());
}
