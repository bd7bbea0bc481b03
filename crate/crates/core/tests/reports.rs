use pairham::check::{check_ph, CheckConfig, ExtenderChoice, Mode, Parallelism, Verdict};
use pairham::format::{parse_cycle, parse_graph, parse_pairing, write_cycle, write_graph, write_pairing};
use pairham::graph::{build_bishop_on_rook, build_complete_bipartite, build_rook};
use pairham::matching::{enumerate_pairings, random_pairing};
use pairham::{extend_rook, verify_extension};

#[test]
fn report_json_field_names() {
    let g = build_rook(2, 3).unwrap();
    let r = check_ph(&g, Mode::Exhaustive, ExtenderChoice::Search, &CheckConfig::default()).unwrap();
    let json: serde_json::Value = serde_json::to_value(&r).unwrap();
    for key in [
        "graph", "order", "mode", "extender", "pairings_tested", "extended", "failures",
        "inconclusive", "escalations", "disagreements", "verdict",
    ] {
        assert!(json.get(key).is_some(), "missing {key}");
    }
    assert!(json.get("wall_time").is_none());
    assert_eq!(json["graph"], "rook 2 3");
    assert_eq!(json["mode"], "exhaustive");
    assert_eq!(json["verdict"]["kind"], "not_ph");
    assert_eq!(json["verdict"]["witness"]["outcome"], "nonextendable");
    assert_eq!(json["failures"][0], serde_json::json!(["0.0 1.0", "0.1 1.1", "0.2 1.2"]));
}

#[test]
fn sampled_reports_are_reproducible() {
    let g = build_rook(4, 5).unwrap();
    let mode = Mode::Sampled { n: 50, seed: 42 };
    let seq = CheckConfig { parallelism: Parallelism::Sequential, ..CheckConfig::default() };
    let a = check_ph(&g, mode, ExtenderChoice::Both, &seq).unwrap();
    let b = check_ph(&g, mode, ExtenderChoice::Both, &CheckConfig::default()).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert!(a.disagreements.is_empty());
    assert_eq!(a.verdict, Verdict::SampledNoCounterexample);
}

#[test]
fn bishop_on_two_rows_uses_the_bipartite_construction() {
    let g = build_bishop_on_rook(2, 4).unwrap();
    let r = check_ph(&g, Mode::Exhaustive, ExtenderChoice::Both, &CheckConfig::default()).unwrap();
    assert_eq!(r.extended, 105);
    assert!(r.disagreements.is_empty());
    let k = build_complete_bipartite(4, 4).unwrap();
    let r = check_ph(&k, Mode::Exhaustive, ExtenderChoice::Constructive, &CheckConfig::default()).unwrap();
    assert_eq!((r.extended, r.escalations), (105, 0));
}

#[test]
fn files_round_trip_through_extension() {
    let g = build_rook(4, 3).unwrap();
    let g2 = parse_graph(&write_graph(&g)).unwrap();
    assert_eq!(g, g2);
    for seed in 0..25 {
        let m = random_pairing(&g, seed).unwrap();
        let m2 = parse_pairing(&write_pairing(&m)).unwrap();
        assert_eq!(m, m2);
        let c = extend_rook(4, 3, &m2).unwrap().cycle().cloned().unwrap();
        let c2 = parse_cycle(&write_cycle(&c, Some(&m2))).unwrap();
        assert_eq!(c, c2);
        assert!(verify_extension(&g2, &m2, &c2));
    }
}

#[test]
fn four_by_five_two_row_transpose_is_ph_at_sample() {
    let g = build_rook(5, 4).unwrap();
    let r = check_ph(&g, Mode::Sampled { n: 100, seed: 1 }, ExtenderChoice::Both, &CheckConfig::default()).unwrap();
    assert_eq!(r.extended, 100);
    assert!(r.disagreements.is_empty());
    assert!(enumerate_pairings(&g).is_ok());
}
