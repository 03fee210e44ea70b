//! The `COARTIN_MAX_M` environment variable: its own test binary, so the
//! process-global mutation cannot race other tests.

#[test]
fn environment_cap_is_honored_and_overridable() {
    // Env caps when no flag is given.
    std::env::set_var(coartin_cli::MAX_M_ENV, "5");
    let (code, _, err) = coartin_cli::run_for_test(&["orders", "--m", "6"]);
    assert_eq!(code, 2, "{err}");
    assert!(err.contains(coartin_cli::MAX_M_ENV), "{err}");

    // An explicit flag wins over the environment.
    let (code, out, err) = coartin_cli::run_for_test(&["orders", "--m", "6", "--max-m", "10"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("\"L\""));

    // A raised env value admits the same request.
    std::env::set_var(coartin_cli::MAX_M_ENV, "30");
    let (code, _, err) = coartin_cli::run_for_test(&["orders", "--m", "6"]);
    assert_eq!(code, 0, "{err}");

    // A malformed value is a validation error, not a silent default.
    std::env::set_var(coartin_cli::MAX_M_ENV, "many");
    let (code, _, err) = coartin_cli::run_for_test(&["orders", "--m", "6"]);
    assert_eq!(code, 2, "{err}");

    // Without the variable the default cap of 20 applies.
    std::env::remove_var(coartin_cli::MAX_M_ENV);
    let (code, _, _) = coartin_cli::run_for_test(&["orders", "--m", "21"]);
    assert_eq!(code, 2);
    let (code, _, err) = coartin_cli::run_for_test(&["orders", "--m", "12"]);
    assert_eq!(code, 0, "{err}");
}
