use distsketch::generate::{generate, GraphKind, WeightSpec};
use distsketch::hierarchy::{max_levels, sample_hierarchy};
use distsketch::oracle::{centralized_tz, GraphFacts};
use distsketch::tz::build_tz_with_levels;
use distsketch::{Mode, RngStream};

fn corpus() -> Vec<(String, GraphKind)> {
    let w = WeightSpec::Uniform { lo: 1, hi: 16 };
    vec![
        ("path".into(), GraphKind::Path { n: 24, weights: w }),
        ("grid".into(), GraphKind::Grid { rows: 5, cols: 6, weights: w }),
        ("er32".into(), GraphKind::ErdosRenyi { n: 32, p: 0.2, weights: w }),
        ("er64".into(), GraphKind::ErdosRenyi { n: 64, p: 0.1, weights: WeightSpec::Unit }),
        ("rw48".into(), GraphKind::RandomWeighted { n: 48, avg_degree: 3.0, max_weight: 9 }),
    ]
}

#[test]
fn distributed_labels_equal_centralized_in_both_modes() {
    for (name, kind) in corpus() {
        for seed in 0..4u64 {
            let g = generate(&kind, RngStream::new(seed)).unwrap();
            let facts = GraphFacts::compute(&g);
            for k in 1..=max_levels(g.node_count()).min(4) {
                let levels = sample_hierarchy(g.node_count(), k, RngStream::new(seed).substream(9)).unwrap();
                let want = centralized_tz(&facts.metric, &levels).unwrap();
                let fixed = build_tz_with_levels(&g, levels.clone(), Mode::FixedS { spd: facts.spd }).unwrap();
                let detect = build_tz_with_levels(&g, levels, Mode::Detect).unwrap();
                assert_eq!(fixed.labels, want, "{name} seed {seed} k {k} fixed");
                assert_eq!(detect.labels, want, "{name} seed {seed} k {k} detect");
                assert_eq!(fixed.metrics.data_msgs, detect.metrics.data_msgs);
                assert_eq!(detect.metrics.echo_msgs(), detect.metrics.announce_msgs());
                for l in &fixed.labels {
                    l.check().unwrap();
                }
            }
        }
    }
}
