//! Networks shared by unit tests across modules.

use std::io::Cursor;

use crate::temporal_graph::{parse_contact_list, ParseOptions, TemporalNetwork};

pub(crate) fn parse(text: &str) -> TemporalNetwork {
    parse_contact_list(Cursor::new(text), &ParseOptions::default())
        .expect("parse failed")
        .network
}

/// the 6-node contact table: A..F, T = 6, 19 events
pub(crate) fn six_node_fixture() -> TemporalNetwork {
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

/// the 4-node worked example: controller on A, T = 4.
///
/// Contacts: (A,B,2), (B,C,3), (A,C,4), (B,D,4); snapshot 1 is empty, so it
/// is built directly rather than parsed (parsing would compact the three
/// distinct timestamps down to 1..=3). Parameter ids follow (t,u,v) order:
/// 0 = (A,B,2), 1 = (B,C,3), 2 = (A,C,4), 3 = (B,D,4).
pub(crate) fn worked_example() -> TemporalNetwork {
    TemporalNetwork::from_events(
        vec!["A".into(), "B".into(), "C".into(), "D".into()],
        4,
        [(2, 0, 1), (3, 1, 2), (4, 0, 2), (4, 1, 3)],
    )
    .unwrap()
}
