use lfmaxwell_web::{convergence_rows, slice_values, sweep_rows, CONVERGENCE_STRIDE, SWEEP_STRIDE};

#[test]
fn sweep_shows_singular_original_and_bounded_stabilized() {
    let rows = sweep_rows(3, -3.0, 6.0, 4, true).unwrap();
    assert_eq!(rows.len(), 5 * SWEEP_STRIDE);
    let row = |k: usize| &rows[k * SWEEP_STRIDE..(k + 1) * SWEEP_STRIDE];
    assert_eq!(row(0)[0], 0.0);
    assert!(row(0)[1].is_infinite());
    assert!(row(0)[3].is_nan());
    for k in 0..5 {
        assert!(row(k)[2].is_finite());
        assert!(row(k)[4] <= 1e-10);
    }
    assert!((row(4)[0] - 1e6).abs() < 1e-6);
    // original conditioning improves with frequency
    assert!(row(1)[1] > row(4)[1]);
}

#[test]
fn slice_is_finite_and_sized() {
    let v = slice_values(3, 100.0, "tree-cotree", "E", 0.5, 16).unwrap();
    assert_eq!(v.len(), 256);
    assert!(v.iter().all(|x| x.is_finite() && *x >= 0.0));
    assert!(v.iter().any(|x| *x > 0.0));
    // conduction current lives in the bar only
    let j = slice_values(3, 100.0, "lagrange", "J_e", 0.25, 22).unwrap();
    assert!(j[0] == 0.0 && j[11 * 22 + 11] > 0.0);
}

#[test]
fn convergence_rows_decrease() {
    let rows = convergence_rows(6e7, 10.0, 3).unwrap();
    assert_eq!(rows.len(), 3 * CONVERGENCE_STRIDE);
    let tc: Vec<f64> = rows.chunks(CONVERGENCE_STRIDE).map(|r| r[1]).collect();
    assert!(tc[0] > tc[1] && tc[1] > tc[2]);
    let air = convergence_rows(0.0, 10.0, 3).unwrap();
    assert!(air[2 * CONVERGENCE_STRIDE + 2].is_nan(), "original breaks down in air at 10 Hz on 8^3");
}

#[test]
fn bad_inputs_are_rejected() {
    assert!(sweep_rows(0, 0.0, 1.0, 3, false).is_err());
    assert!(sweep_rows(3, 0.0, 1.0, 0, false).is_err());
    assert!(slice_values(3, 1.0, "magic", "E", 0.5, 8).is_err());
    assert!(slice_values(3, 1.0, "tc", "Q", 0.5, 8).is_err());
    assert!(slice_values(3, 1.0, "tc", "E", 1.5, 8).is_err());
    assert!(convergence_rows(0.0, 10.0, 9).is_err());
    assert!(convergence_rows(6e7, 0.0, 1).is_err());
}
