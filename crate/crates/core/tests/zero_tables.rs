use std::path::Path;

use pnt_lab::zeros::{bundled_table_path, load_ordinates, load_zero_set, parse_ordinates};
use pnt_lab::{LabError, ZeroSource};

#[test]
fn bundled_table_matches_known_zeros() {
    let zs = load_ordinates(bundled_table_path()).unwrap();
    assert_eq!(zs.source(), ZeroSource::RealTable);
    let g: Vec<f64> = zs.entries().iter().map(|z| z.gamma).collect();
    assert!((g[0] - 14.134725142).abs() < 1e-9);
    assert!((g[1] - 21.022039639).abs() < 1e-9);
    assert!((g[99] - 236.524229666).abs() < 1e-9);
    assert!(zs.entries().iter().all(|z| z.beta == 0.5));
    assert!(zs.gamma_max() > 74_000.0);
}

/// N(T) against the Riemann–von Mangoldt main term; S(T) stays small.
#[test]
fn counting_function_tracks_main_term() {
    let zs = load_ordinates(bundled_table_path()).unwrap();
    let g: Vec<f64> = zs.entries().iter().map(|z| z.gamma).collect();
    let two_pi = 2.0 * std::f64::consts::PI;
    for t in [100.5, 1000.5, 10_000.5, 50_000.5, 74_000.5] {
        let n = g.partition_point(|&x| x < t) as f64;
        let main = t / two_pi * (t / two_pi).ln() - t / two_pi + 7.0 / 8.0;
        assert!((n - main).abs() < 2.5, "T={t}: N={n}, main={main}");
    }
}

#[test]
fn parse_errors_carry_line_numbers() {
    let p = Path::new("t.txt");
    let err = parse_ordinates("# header\n14.1\n21.0\nabc\n", p).unwrap_err();
    assert!(matches!(err, LabError::Parse { line: 4, .. }), "{err}");
    let err = parse_ordinates("14.1\n21.0\n21.0\n", p).unwrap_err();
    assert!(
        matches!(err, LabError::NotAscending { line: 3, .. }),
        "{err}"
    );
    let err = parse_ordinates("14.1\n-3\n", p).unwrap_err();
    assert!(matches!(err, LabError::Parse { line: 2, .. }), "{err}");
    let err = parse_ordinates("14.1\n21.0", p).unwrap();
    assert_eq!(err.len(), 2);
}

#[test]
fn truncated_table_reports_coverage() {
    let zs = parse_ordinates("14.134725142\n21.022039639\n25.01085758\n", Path::new("t")).unwrap();
    assert!(matches!(
        zs.require_coverage(30.0),
        Err(LabError::Coverage { .. })
    ));
    assert!(zs.require_coverage(25.0).is_ok());
}

#[test]
fn round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let zs = load_ordinates(bundled_table_path()).unwrap();
    let first = dir.path().join("a.txt");
    std::fs::write(&first, zs.to_ordinate_text()).unwrap();
    let again = load_zero_set(&first).unwrap();
    assert_eq!(again.entries(), zs.entries());
    assert_eq!(again.to_ordinate_text(), zs.to_ordinate_text());
}

#[test]
fn missing_file_is_an_io_error() {
    let err = load_ordinates("/nonexistent/zeros.txt").unwrap_err();
    assert_eq!(err.exit_code(), 2);
}
