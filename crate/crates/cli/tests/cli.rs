use num_bigint::BigInt;
use proptest::prelude::*;
use qrrt_cli::{emit_json, parse_json, run};
use qrrt_core::{Divergence, Status, VerificationReport};

fn qrrt(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("qrrt").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn report(status: Status, div: Option<Divergence>) -> VerificationReport {
    VerificationReport {
        target: "t".into(),
        status,
        checked_q_order: 50,
        checked_a_order: None,
        first_divergence: div,
        elapsed_ms: 3,
        notes: Vec::new(),
    }
}

#[test]
fn expand_example() {
    let (code, out, _) = qrrt(&["expand", "poch(q;q;3)", "--order", "10"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "1 -1q -1q^2 +1q^4 +1q^5 -1q^6");
}

#[test]
fn expand_in_a() {
    let (code, out, _) = qrrt(&["expand", "poch(a*q;q;2)", "--order", "5", "--a-order", "1"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "1 -1aq -1aq^2");
}

#[test]
fn verify_rr1() {
    let (code, out, _) = qrrt(&["verify", "rr1", "--order", "100"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("rr1 pass q_order=100"), "{out}");
}

#[test]
fn partitions_table() {
    let (code, out, _) = qrrt(&["partitions", "--d", "2", "--k", "3", "--i", "3", "--nmax", "4"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "n=4: A=5 B=5 ok"), "{out}");
    let (code, out, _) = qrrt(&["partitions", "--d", "1", "--k", "2", "--i", "1", "--nmax", "6", "--refined", "--order", "12", "--a-order", "4"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(qrrt(&["bogus"]).0, 2);
    assert_eq!(qrrt(&["verify", "no-such-entry"]).0, 2);
    assert_eq!(qrrt(&["expand", "infprod(q^2)"]).0, 2);
    assert_eq!(qrrt(&["partitions", "--d", "2", "--k", "3", "--i", "5"]).0, 2);
    assert_eq!(qrrt(&["catalog"]).0, 2);
    assert_eq!(qrrt(&["--help"]).0, 0);
}

#[test]
fn failing_file_exits_one() {
    let dir = std::env::temp_dir().join(format!("qrrt-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.id");
    std::fs::write(&bad, "# modulus 20 instead of 18\nbad: sum(n>=0, sum(r>=0, q^(n^2+2*r^2)/(poch(q;q^2;n)*poch(q^2;q^2;r)*poch(q;q;n-2*r)))) = infprod(q^8,q^10,q^20;q^20)/infprod(q;q)\n").unwrap();
    let json = dir.join("out.json");
    let (code, _, err) = qrrt(&["verify", bad.to_str().unwrap(), "--order", "40", "--json", json.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("first divergence at lhs = rhs"), "{err}");
    let reports = parse_json(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(reports[0].status, Status::Fail);
    assert_eq!(reports[0].first_divergence.as_ref().unwrap().q_exp, 18);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn catalog_subset_and_order() {
    let (code, out, _) = qrrt(&["catalog", "rr2", "rr1", "mod18", "--order", "60", "--jobs", "2", "--json", "-"]);
    assert_eq!(code, 0);
    let json = out.lines().last().unwrap();
    let names: Vec<String> = parse_json(json).unwrap().into_iter().map(|r| r.target).collect();
    assert_eq!(names, ["mod18", "rr1", "rr2"]);
    assert!(out.contains("3 entries: 3 pass, 0 fail, 0 ambiguous"));
    let (_, list, _) = qrrt(&["catalog", "--list"]);
    assert!(list.lines().any(|l| l == "a-mod18i"));
}

#[test]
fn bailey_and_qdiff() {
    assert_eq!(qrrt(&["bailey", "--d", "2", "--k", "4", "--nmax", "6", "--order", "30", "--a-order", "10"]).0, 0);
    let (code, out, _) = qrrt(&["qdiff", "--d", "2", "--k", "3", "--order", "30", "--a-order", "8"]);
    assert_eq!(code, 0);
    assert!(out.contains("Q system") && out.contains("F system"), "{out}");
}

#[test]
fn json_schema() {
    assert_eq!(emit_json(&[]), r#"{"version":1,"reports":[]}"#);
    let pass = emit_json(&[report(Status::Pass, None)]);
    assert_eq!(pass, r#"{"version":1,"reports":[{"name":"t","status":"pass","q_order":50,"a_order":null,"elapsed_ms":3}]}"#);
    let d = Divergence { location: "i=2".into(), a_exp: 1, q_exp: 7, lhs_coeff: 3.into(), rhs_coeff: (-4).into() };
    let fail = emit_json(&[report(Status::Fail, Some(d))]);
    assert!(fail.contains(r#""first_divergence":{"location":"i=2","a_exp":1,"q_exp":7,"lhs_coeff":3,"rhs_coeff":-4}"#), "{fail}");
}

fn arb_report() -> impl Strategy<Value = VerificationReport> {
    let div = (any::<i64>(), any::<i64>(), "[a-z0-9= ]{0,8}", any::<i128>(), "-?[1-9][0-9]{0,40}").prop_map(|(a, q, loc, l, r)| Divergence {
        location: loc,
        a_exp: a,
        q_exp: q,
        lhs_coeff: BigInt::from(l),
        rhs_coeff: r.parse().unwrap(),
    });
    (
        "[a-z0-9-]{1,12}",
        prop::option::of(div),
        any::<bool>(),
        0i64..1000,
        prop::option::of(0i64..100),
        any::<u64>(),
    )
        .prop_map(|(name, div, amb, q, a, ms)| VerificationReport {
            target: name,
            status: match (&div, amb) {
                (Some(_), _) => Status::Fail,
                (None, true) => Status::Ambiguous,
                (None, false) => Status::Pass,
            },
            checked_q_order: q,
            checked_a_order: a,
            first_divergence: div,
            elapsed_ms: ms,
            notes: Vec::new(),
        })
}

proptest! {
    #[test]
    fn json_round_trip(reports in prop::collection::vec(arb_report(), 0..5)) {
        prop_assert_eq!(parse_json(&emit_json(&reports)).unwrap(), reports);
    }
}
