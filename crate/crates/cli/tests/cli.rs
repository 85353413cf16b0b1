use std::process::{Command, Output};

fn erlangc(args: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_erlangc"))
        .args(args.split_whitespace())
        .output()
        .expect("binary runs")
}

fn stdout(args: &str) -> String {
    let out = erlangc(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Value column of the row whose first field is `key`.
fn field(csv: &str, key: &str, col: usize) -> String {
    csv.lines()
        .find(|l| l.split(',').next() == Some(key))
        .unwrap_or_else(|| panic!("no row {key} in\n{csv}"))
        .split(',')
        .nth(col)
        .unwrap()
        .to_string()
}

fn column(csv: &str, col: usize) -> Vec<String> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').nth(col).unwrap().to_string())
        .collect()
}

fn parse(s: &str) -> f64 {
    s.parse().unwrap_or_else(|_| panic!("not a number: {s}"))
}

#[test]
fn exact_small_system() {
    let out = stdout("exact --n 2 --rho 1.5");
    assert!((parse(&field(&out, "C", 1)) - 0.642_857_142_9).abs() < 1e-10);
    assert_eq!(field(&out, "C", 2), "recursion");
    let out = stdout("exact --n 2 --rho 2");
    assert_eq!(parse(&field(&out, "C", 1)), 1.0);
}

#[test]
fn exact_erlang_a_matches_oracle() {
    let exact = stdout("exact --n 10 --rho 9 --mu 1 --theta 0.5");
    let oracle = stdout("oracle --n 10 --rho 9 --mu 1 --theta 0.5");
    let p = parse(&field(&exact, "P", 1));
    assert!((p - parse(&field(&oracle, "P", 2))).abs() < 1e-8);
    for key in ["J", "scaled_j"] {
        assert!(parse(&field(&exact, key, 1)) > 0.0);
    }
}

#[test]
fn exact_honours_method_flag() {
    for m in ["direct-sum", "recursion", "quadrature-a", "quadrature-b"] {
        let out = stdout(&format!("exact --n 7 --rho 5 --method {m}"));
        assert_eq!(field(&out, "C", 2), m);
    }
    let out = erlangc("exact --n 7.5 --rho 5 --method recursion");
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn classify_cases() {
    let out = stdout("classify --term 1:0.5");
    assert_eq!(field(&out, "kind", 1), "UnderloadedTheta");
    assert_eq!(parse(&field(&out, "z", 1)), -1.0);
    assert_eq!(
        field(&out, "erlang_c_limit_expression", 1),
        "(1 - xi(z))^-1"
    );

    let out = stdout("classify");
    assert_eq!(field(&out, "kind", 1), "Balanced");
    assert_eq!(parse(&field(&out, "erlang_c_limit", 1)), 1.0);

    let out = stdout("classify --term -1:0.7");
    assert_eq!(field(&out, "kind", 1), "OverloadedOmega");
    assert_eq!(field(&out, "erlang_c_limit", 1), "inf");
}

#[test]
fn classify_rejects_linear_terms() {
    let out = erlangc("classify --term 1:1");
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("--term") && err.contains("sublinear"), "{err}");
}

#[test]
fn converge_square_root_rule() {
    let out = stdout("converge --term 1:0.5 --mu 1 --lambdas 1e2,1e4,1e6 --target erlang-c");
    assert_eq!(
        out.lines().next().unwrap(),
        "lambda,rho,n,finite_value,limit_value,abs_error"
    );
    let err: Vec<f64> = column(&out, 5).iter().map(|s| parse(s)).collect();
    assert_eq!(err.len(), 3);
    assert!(err[0] > err[1] && err[1] > err[2], "{err:?}");
}

#[test]
fn converge_empty_rule_and_infinite_limit() {
    let out = stdout("converge --mu 1 --lambdas 1e4 --target erlang-c");
    assert!((parse(&column(&out, 3)[0]) - 1.0).abs() < 1e-12);

    let out = stdout("converge --term -1:0.7 --mu 1 --lambdas 1e2,1e4 --target erlang-c");
    assert!(column(&out, 4).iter().all(|v| v == "inf"));
}

#[test]
fn converge_row_failures_print_na() {
    let out = erlangc("converge --term -5:0.5 --lambdas 4,100");
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    let first: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(first[3], "NA");
    assert_eq!(first[5], "NA");
    assert!(!String::from_utf8(out.stderr).unwrap().is_empty());
}

#[test]
fn converge_geometric_range() {
    let out = stdout("converge --term 1:0.5 --lambda-range 1e2:1e4:3");
    assert_eq!(column(&out, 0).len(), 3);
}

#[test]
fn sweep_delay_limit_curve() {
    let out = stdout("sweep --target delay-limit --mu 5 --theta 10 --z -3:3:0.05");
    assert_eq!(out.lines().next().unwrap(), "z,value");
    let z: Vec<f64> = column(&out, 0).iter().map(|s| parse(s)).collect();
    let v: Vec<f64> = column(&out, 1).iter().map(|s| parse(s)).collect();
    assert_eq!(z.len(), 121);
    assert_eq!(z[60], 0.0);
    assert!((v[60] - 1.0 / (1.0 + 2f64.sqrt())).abs() < 1e-6);
    assert!(v.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn sweep_erlang_c_limit_increasing() {
    let out = stdout("sweep --target erlang-c-limit --z -3:3:0.5");
    let v: Vec<f64> = column(&out, 1).iter().map(|s| parse(s)).collect();
    assert_eq!(v.len(), 13);
    assert!(v.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn sweep_degenerate_range() {
    let out = stdout("sweep --target delay-limit --z 0:0:1");
    assert_eq!(out.lines().count(), 2);
}

#[test]
fn sweep_finite_targets_need_lambda() {
    assert_eq!(
        erlangc("sweep --target finite-p --z 0:1:1").status.code(),
        Some(3)
    );
    let out = stdout("sweep --target finite-p --lambda 1e5 --z -1:1:1");
    assert_eq!(column(&out, 1).len(), 3);
}

#[test]
fn oracle_agreement() {
    let out = stdout("oracle --n 2 --rho 1.5");
    assert!(parse(&field(&out, "C", 3)) <= 1e-10);
    let out = stdout("oracle --n 10 --rho 9 --mu 1 --theta 0.5");
    for key in ["C", "P", "sum_p_below_n"] {
        assert!(parse(&field(&out, key, 3)) <= 1e-8, "{key}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(erlangc("oracle --n 0 --rho 1").status.code(), Some(3));
    assert_eq!(erlangc("exact --n 2").status.code(), Some(2));
    assert_eq!(erlangc("exact --n two --rho 1").status.code(), Some(2));
    assert_eq!(erlangc("frobnicate").status.code(), Some(2));
    assert_eq!(
        erlangc("sweep --target delay-limit --z 1:0:1")
            .status
            .code(),
        Some(2)
    );
    assert_eq!(erlangc("exact --n 2 --rho -1").status.code(), Some(3));
    assert_eq!(
        erlangc("oracle --n 10 --rho 9 --k 12").status.code(),
        Some(4)
    );
}

#[test]
fn domain_errors_name_the_flag() {
    let err = String::from_utf8(erlangc("exact --n 2 --rho -1").stderr).unwrap();
    assert!(err.contains("--rho"), "{err}");
    let err = String::from_utf8(erlangc("exact --n 2 --rho 1 --theta 0").stderr).unwrap();
    assert!(err.contains("--theta"), "{err}");
}

#[test]
fn numbers_round_trip_with_seventeen_digits() {
    let out = stdout("exact --n 2 --rho 1.5");
    let c = field(&out, "C", 1);
    let significant = c.trim_start_matches(['0', '.']);
    let digits = significant.chars().filter(|ch| ch.is_ascii_digit()).count();
    assert_eq!(digits, 17, "{c}");
}

#[test]
fn identical_flags_give_identical_bytes() {
    let commands = [
        "exact --n 10 --rho 9 --mu 1 --theta 0.5",
        "exact --n 10.5 --rho 9.25",
        "classify --term 1:0.5 --term 2:0.2 --theta 2",
        "converge --term -1:0.5 --theta 1 --lambda-range 1e2:1e6:9 --target delay-probability",
        "converge --term 1:0.5 --lambdas 1e2,1e4,1e6",
        "sweep --target delay-limit --mu 5 --theta 10 --z -3:3:0.05",
        "sweep --target finite-c --lambda 1e4 --z -2:2:0.25",
        "oracle --n 10 --rho 9 --mu 1 --theta 0.5",
    ];
    for cmd in commands {
        let a = erlangc(cmd);
        let b = erlangc(cmd);
        assert_eq!(a.status.code(), Some(0), "{cmd}");
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
}
