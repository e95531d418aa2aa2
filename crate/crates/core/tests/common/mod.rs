//! Networks shared by the integration tests, built through the public API.

#![allow(dead_code)]

use std::io::Cursor;

use tcc_core::temporal_graph::{parse_contact_list, ParseOptions};
use tcc_core::TemporalNetwork;

pub fn parse(text: &str) -> TemporalNetwork {
    parse_contact_list(Cursor::new(text), &ParseOptions::default())
        .expect("fixture should parse")
        .network
}

/// the 6-node contact table: A..F, T = 6, 19 events
pub fn six_node_table() -> TemporalNetwork {
    parse(
        "1\tA\tB\n2\tA\tB\n3\tA\tB\n4\tA\tB\n\
         4\tB\tC\n6\tB\tC\n\
         2\tC\tD\n3\tC\tD\n\
         3\tD\tE\n4\tD\tE\n5\tD\tE\n6\tD\tE\n\
         1\tE\tF\n3\tE\tF\n\
         5\tB\tF\n6\tB\tF\n\
         4\tC\tF\n5\tC\tF\n6\tC\tF\n",
    )
}

/// A..D over 4 steps: (A,B) at 2, (B,C) at 3, (A,C) and (B,D) at 4.
///
/// Snapshot 1 is deliberately empty, so the network is built directly;
/// parsing the same contacts would compact the timestamps to 1..=3.
pub fn four_node_example() -> TemporalNetwork {
    TemporalNetwork::from_events(
        vec!["A".into(), "B".into(), "C".into(), "D".into()],
        4,
        [(2, 0, 1), (3, 1, 2), (4, 0, 2), (4, 1, 3)],
    )
    .expect("fixture should build")
}
