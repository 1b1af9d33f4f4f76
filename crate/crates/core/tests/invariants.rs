//! Property tests over small random connected graphs.

use std::collections::BTreeMap;

use proptest::prelude::*;

use distsketch::codec::SketchSet;
use distsketch::hierarchy::{max_levels, sample_hierarchy};
use distsketch::oracle::{centralized_tz, DistanceMatrix, GraphFacts};
use distsketch::query::tz_estimate;
use distsketch::slack::{build_density_net_in, build_slack3_sketches};
use distsketch::tz::build_tz_with_levels;
use distsketch::{Eps, Mode, RngStream, WeightedGraph};

/// A random spanning tree plus extra edges; duplicate pairs keep the first
/// weight.
fn graph() -> impl Strategy<Value = WeightedGraph> {
    (2usize..14).prop_flat_map(|n| {
        let tree = proptest::collection::vec((any::<prop::sample::Index>(), 1u64..9), n - 1);
        let extra = proptest::collection::vec((0..n, 0..n, 1u64..9), 0..2 * n);
        (Just(n), tree, extra).prop_map(|(n, tree, extra)| {
            let mut edges = BTreeMap::new();
            for (v, (parent, w)) in tree.into_iter().enumerate() {
                let v = v + 1;
                edges.insert((parent.index(v), v), w);
            }
            for (a, b, w) in extra {
                if a != b {
                    edges.entry((a.min(b), a.max(b))).or_insert(w);
                }
            }
            WeightedGraph::new(n, edges.into_iter().map(|((a, b), w)| (a, b, w))).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tz_protocol_matches_oracle_and_stretch(g in graph(), k in 1usize..4, seed in any::<u64>(), detect in any::<bool>()) {
        let n = g.node_count();
        let k = k.min(max_levels(n));
        let facts = GraphFacts::compute(&g);
        let levels = sample_hierarchy(n, k, RngStream::new(seed)).unwrap();
        let want = centralized_tz(&facts.metric, &levels).unwrap();
        let mode = if detect { Mode::Detect } else { Mode::FixedS { spd: facts.spd } };
        let b = build_tz_with_levels(&g, levels, mode).unwrap();
        prop_assert_eq!(&b.labels, &want);
        prop_assert!(b.metrics.is_consistent());
        for l in &b.labels {
            prop_assert!(l.check().is_ok());
        }
        for u in 0..n {
            for v in 0..n {
                let d = facts.metric.get(u, v);
                let e = tz_estimate(&b.labels[u], &b.labels[v]).unwrap();
                prop_assert!(d <= e && e <= (2 * k as u64 - 1) * d, "{} {} {} {}", u, v, d, e);
            }
        }
        let set = SketchSet::Tz(b.labels);
        prop_assert_eq!(SketchSet::decode(&set.encode()).unwrap(), set);
    }

    #[test]
    fn slack3_never_underestimates(g in graph(), seed in any::<u64>(), denom in 1u64..9) {
        let m = DistanceMatrix::compute(&g);
        let eps = Eps::new(1, denom).unwrap();
        let net = build_density_net_in(&m, eps, RngStream::new(seed)).unwrap();
        prop_assert!(net.verify(&m).is_ok());
        let (tables, _) = build_slack3_sketches(&g, &net, Mode::Detect).unwrap();
        let n = g.node_count();
        for u in 0..n {
            for &(w, d) in &tables[u].table {
                prop_assert_eq!(d, m.get(u, w));
            }
            for v in 0..n {
                let e = distsketch::query::slack3_estimate(&tables[u], &tables[v]).unwrap();
                prop_assert!(e >= m.get(u, v));
            }
        }
    }

    #[test]
    fn decode_never_panics(bytes in proptest::collection::vec(any::<u8>(), 0..200)) {
        let _ = SketchSet::decode(&bytes);
    }
}
