use std::io::Write;
use std::process::{Command, Output as Run};

#[allow(dead_code)]
#[path = "../src/output.rs"]
mod output;

use output::Output;

fn cli(args: &[&str]) -> Run {
    Command::new(env!("CARGO_BIN_EXE_worddomain"))
        .args(args)
        .output()
        .expect("run worddomain")
}

fn stdout(r: &Run) -> String {
    String::from_utf8(r.stdout.clone())
        .unwrap()
        .trim_end()
        .to_string()
}

fn ok(args: &[&str]) -> String {
    let r = cli(args);
    assert_eq!(
        r.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&r.stderr)
    );
    stdout(&r)
}

/// Runs with `--json`, checks the object survives a typed round trip, and returns it.
fn json(args: &[&str]) -> (i32, Output) {
    let mut full = args.to_vec();
    full.push("--json");
    let r = cli(&full);
    let text = stdout(&r);
    let parsed: Output = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{text}: {e}"));
    assert_eq!(serde_json::to_string(&parsed).unwrap(), text);
    (r.status.code().unwrap(), parsed)
}

#[test]
fn distances() {
    assert_eq!(ok(&["dist", "qb", "a", "ab"]), "1/4 (= 2^-1 - 2^-2)");
    assert_eq!(ok(&["dist", "baire", "ab", "ac"]), "1/2 (= 2^-1)");
    assert_eq!(ok(&["dist", "qb", "eps", "(a)^w"]), "1");
    assert_eq!(ok(&["dist", "qb", "ab", "a"]), "1");
    assert_eq!(ok(&["dist", "d0", "a", "ab"]), "0");
    assert_eq!(ok(&["dist", "sym-dw", "a", "ab"]), "1/4 (= 2^-1 - 2^-2)");
}

#[test]
fn balls_chains_and_limits() {
    assert_eq!(ok(&["ball-leq", "qb", "(a,1/2)", "(ab,1/4)"]), "true");
    assert_eq!(ok(&["ball-leq", "qb", "(ab,1/4)", "(a,1/2)"]), "false");
    assert_eq!(
        ok(&[
            "chain-lub",
            "qb",
            "param: target=(a)^w lengths=n radii=0+1*2^-n"
        ]),
        "((a)^w, 0)"
    );
    assert_eq!(
        ok(&["yoneda-limit", "prefix: target=(ab)^w lengths=2n+1"]),
        "(ab)^w"
    );
    assert_eq!(ok(&["yoneda-limit", "explicit: a ab abb ..."]), "abb");
    let approx = ok(&["approx-chain", "((a)^w,1/4)", "--elements", "2"]);
    assert!(approx.lines().count() == 3, "{approx}");
}

#[test]
fn way_below_verdicts() {
    let (code, out) = json(&["way-below", "(a,1)", "(ab,1/4)"]);
    assert_eq!(code, 0);
    let Output::WayBelow { verdict, .. } = out else {
        panic!("{out:?}")
    };
    assert!(verdict.starts_with("CertifiedBelow"), "{verdict}");

    let (_, out) = json(&[
        "way-below",
        "(a,1/2)",
        "((a)^w,0)",
        "--chain",
        "param: target=(a)^w lengths=n+1 radii=0+2*2^-n",
    ]);
    let Output::WayBelow {
        verdict, witness, ..
    } = out
    else {
        panic!()
    };
    assert!(verdict.starts_with("Refuted"), "{verdict}");
    assert_eq!(witness.unwrap().verdict, "NoWitness");
}

#[test]
fn exit_codes_and_error_objects() {
    let r = cli(&["yoneda-limit", "explicit: a b"]);
    assert_eq!(r.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&r.stderr).contains("NotLeftKCauchy"));

    let (code, out) = json(&["dist", "qb", "a(", "ab"]);
    assert_eq!(code, 2);
    let Output::Error { exit_code, .. } = out else {
        panic!("{out:?}")
    };
    assert_eq!(exit_code, 2);

    assert_eq!(cli(&["dist", "nope", "a", "b"]).status.code(), Some(2));
    assert_eq!(cli(&["check", "nope"]).status.code(), Some(2));
    assert_eq!(
        cli(&["dist", "sym-sym-qb", "a", "b"]).status.code(),
        Some(2)
    );
    assert_eq!(
        cli(&["--alphabet", "ab", "dist", "qb", "a", "c"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn every_command_round_trips_as_json() {
    let cmds: &[&[&str]] = &[
        &["dist", "dw", "ab", "(ab)^w"],
        &["ball-leq", "qb", "(a,1)", "(b,0)"],
        &["chain-lub", "qb", "finite: (eps, 1) (a, 1/2)"],
        &["yoneda-limit", "prefix: target=(a)^w lengths=n"],
        &["approx-chain", "(ab,0)"],
        &[
            "way-below",
            "(eps,1)",
            "(a,0)",
            "--chain",
            "param: centers=a radii=0+1*2^-n",
        ],
        &["check", "t1"],
        &["oracle"],
    ];
    for c in cmds {
        let (code, _) = json(c);
        assert_eq!(code, 0, "{c:?}");
    }
}

#[test]
fn output_is_deterministic_across_runs_and_strategies() {
    for args in [
        &["check", "yoneda", "--seed", "5"][..],
        &["oracle", "--metric", "dw"],
    ] {
        let a = cli(&[args, &["--json"]].concat());
        let b = cli(&[args, &["--json"]].concat());
        let s = cli(&[args, &["--json", "--sequential"]].concat());
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.stdout, s.stdout);
    }
    let x = cli(&["check", "yoneda", "--seed", "5", "--json"]);
    let y = cli(&["check", "yoneda", "--seed", "6", "--json"]);
    assert_ne!(x.stdout, y.stdout);
}

#[test]
fn check_reports_mutant_witnesses() {
    let (code, out) = json(&["check", "remarks", "--inject-fault", "qb-prefix-flip"]);
    assert_eq!(code, 1);
    let Output::Check { passed, reports } = out else {
        panic!()
    };
    assert!(!passed);
    assert!(reports[0].violations > 0);
    assert_eq!(
        cli(&["check", "t1", "--inject-fault", "bogus"])
            .status
            .code(),
        Some(2)
    );
}

fn poset_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn oracle_on_files() {
    let diamond = poset_file(
        "# bottom, two incomparable middles, top\n\
         element bot\nelement l\nelement r\nelement top\n\
         leq bot l\nleq bot r\nleq l top\nleq r top\nleq bot top\n",
    );
    let text = ok(&["oracle", diamond.path().to_str().unwrap()]);
    assert!(text.contains("dcpo: yes, continuous: yes"), "{text}");
    assert!(text.contains("way-below equals leq: yes"), "{text}");

    // reflexive pairs are implied
    let antichain = poset_file("element x\nelement y\nelement z\n");
    let (code, out) = json(&["oracle", antichain.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    let Output::Oracle {
        way_below,
        elements,
        ..
    } = out
    else {
        panic!()
    };
    assert_eq!(elements.len(), 3);
    assert_eq!(way_below.len(), 3);

    let cyclic = poset_file("element x\nelement y\nleq x y\nleq y x\n");
    assert_eq!(
        cli(&["oracle", cyclic.path().to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
    let garbage = poset_file("frobnicate\n");
    assert_eq!(
        cli(&["oracle", garbage.path().to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        cli(&["oracle", "/nonexistent/poset"]).status.code(),
        Some(2)
    );
}

#[test]
fn oracle_on_ball_grid() {
    let (code, out) = json(&["oracle"]);
    assert_eq!(code, 0);
    let Output::Oracle {
        elements,
        dcpo,
        continuous,
        way_below_is_leq,
        ..
    } = out
    else {
        panic!()
    };
    assert_eq!(elements.len(), 12);
    assert!(dcpo && continuous && way_below_is_leq);
}
