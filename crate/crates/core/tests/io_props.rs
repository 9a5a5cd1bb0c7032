use proptest::prelude::*;

use dirflag::io::{parse_graph, to_flag, Dialect, GraphInput};
use dirflag::rational::{ratio, ExtRational};

fn flag_input() -> impl Strategy<Value = GraphInput> {
    (1usize..=6).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|(u, v)| u != v).collect();
        let m = pairs.len();
        (
            proptest::collection::vec((0i64..10, 1i64..4), n),
            proptest::collection::vec(proptest::option::weighted(0.4, proptest::option::weighted(0.8, (1i64..10, 1i64..4))), m),
        )
            .prop_map(move |(values, weights)| {
                let edges = pairs
                    .iter()
                    .zip(weights)
                    .filter_map(|(&(u, v), w)| {
                        w.map(|w| (u, v, Some(w.map_or(ExtRational::Infinity, |(a, b)| ExtRational::Finite(ratio(a, b))))))
                    })
                    .collect();
                GraphInput {
                    dialect: Dialect::Flag,
                    labels: None,
                    vertex_values: values.into_iter().map(|(a, b)| ratio(a, b)).collect(),
                    edges,
                }
            })
    })
}

proptest! {
    #[test]
    fn flag_files_round_trip(input in flag_input()) {
        let text = to_flag(&input);
        prop_assert_eq!(parse_graph(&text).unwrap(), input);
    }

    #[test]
    fn corrupted_lines_are_reported(input in flag_input(), junk in "[a-z]{1,5}") {
        let text = to_flag(&input);
        let lines: Vec<&str> = text.lines().collect();
        let at = lines.len();
        let bad = format!("{text}0 {junk}\n");
        let err = parse_graph(&bad).unwrap_err();
        prop_assert_eq!(err.line, at + 1);
    }
}
