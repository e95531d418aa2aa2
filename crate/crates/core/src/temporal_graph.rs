//! Temporal-network data model and contact-list ingestion.
//!
//! A network is a set of nodes plus timed undirected contacts `(u, v, t)`
//! with `t` in `1..=T`. Each distinct contact owns one free-parameter id;
//! both directions of the same contact share that id.

use std::collections::{BTreeMap, BTreeSet};
use std::io::BufRead;

use crate::{Error, Result};

/// dense node index, `0..N`
pub type NodeId = u32;
/// snapshot index, `1..=T`
pub type TimeStep = usize;
/// dense free-parameter index, one per timed contact
pub type ParamId = u32;

/// one undirected timed contact, canonicalized so `u < v`
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContactEvent {
    pub t: TimeStep,
    pub u: NodeId,
    pub v: NodeId,
}

impl ContactEvent {
    pub fn new(t: TimeStep, a: NodeId, b: NodeId) -> Self {
        ContactEvent {
            t,
            u: a.min(b),
            v: a.max(b),
        }
    }
}

/// bijection between canonical timed contacts and parameter ids `0..#events`.
///
/// Ids follow the `(t, u, v)` sort order of the event list, so they are stable
/// for a given network no matter how it was ingested.
#[derive(Debug, Clone)]
pub struct SymbolTable {
    events: Vec<ContactEvent>,
}

impl SymbolTable {
    fn new(events: Vec<ContactEvent>) -> Self {
        SymbolTable { events }
    }

    /// parameter id of the contact between `a` and `b` at time `t`, either direction
    pub fn param(&self, a: NodeId, b: NodeId, t: TimeStep) -> Option<ParamId> {
        let key = ContactEvent::new(t, a, b);
        self.events.binary_search(&key).ok().map(|i| i as ParamId)
    }

    /// the contact a parameter id stands for
    pub fn contact(&self, id: ParamId) -> ContactEvent {
        self.events[id as usize]
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }
}

/// an immutable temporal network: interned nodes, horizon, sorted events and
/// per-snapshot adjacency
#[derive(Debug, Clone)]
pub struct TemporalNetwork {
    labels: Vec<String>,
    ids: BTreeMap<String, NodeId>,
    horizon: TimeStep,
    events: Vec<ContactEvent>,
    symbols: SymbolTable,
    /// `snapshots[t-1]` lists the contacts of snapshot `t` with their param ids
    snapshots: Vec<Vec<(NodeId, NodeId, ParamId)>>,
    /// `adjacency[t-1][i]` lists `(neighbor, param)` of node `i` at time `t`,
    /// sorted by neighbor id
    adjacency: Vec<Vec<Vec<(NodeId, ParamId)>>>,
}

impl TemporalNetwork {
    /// builds a network from interned labels and raw `(t, a, b)` triples.
    ///
    /// Triples are canonicalized and duplicates collapsed. Self-loops and
    /// out-of-range endpoints or times are rejected.
    pub fn from_events<I>(labels: Vec<String>, horizon: TimeStep, raw: I) -> Result<Self>
    where
        I: IntoIterator<Item = (TimeStep, NodeId, NodeId)>,
    {
        if labels.is_empty() {
            return Err(Error::InvalidConfig("a network needs at least one node".into()));
        }
        if horizon == 0 {
            return Err(Error::InvalidConfig("horizon must be at least 1".into()));
        }
        let n = labels.len() as u32;
        let mut events = Vec::new();
        for (t, a, b) in raw {
            if a == b {
                return Err(Error::InvalidConfig(format!("self-loop on node {a} at time {t}")));
            }
            if a >= n || b >= n {
                return Err(Error::NodeOutOfRange(a.max(b)));
            }
            if t < 1 || t > horizon {
                return Err(Error::TimeOutOfRange { t, horizon });
            }
            events.push(ContactEvent::new(t, a, b));
        }
        events.sort();
        events.dedup();

        let mut snapshots = vec![Vec::new(); horizon];
        let mut adjacency = vec![vec![Vec::new(); n as usize]; horizon];
        for (id, e) in events.iter().enumerate() {
            let id = id as ParamId;
            snapshots[e.t - 1].push((e.u, e.v, id));
            adjacency[e.t - 1][e.u as usize].push((e.v, id));
            adjacency[e.t - 1][e.v as usize].push((e.u, id));
        }
        for per_t in &mut adjacency {
            for list in per_t {
                list.sort_unstable();
            }
        }

        let mut ids = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if ids.insert(l.clone(), i as NodeId).is_some() {
                return Err(Error::InvalidConfig(format!("duplicate node label `{l}`")));
            }
        }

        Ok(TemporalNetwork {
            labels,
            ids,
            horizon,
            symbols: SymbolTable::new(events.clone()),
            events,
            snapshots,
            adjacency,
        })
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn horizon(&self) -> TimeStep {
        self.horizon
    }

    pub fn events(&self) -> &[ContactEvent] {
        &self.events
    }

    pub fn symbols(&self) -> &SymbolTable {
        &self.symbols
    }

    /// contacts of snapshot `t` (1-based)
    pub fn snapshot(&self, t: TimeStep) -> &[(NodeId, NodeId, ParamId)] {
        &self.snapshots[t - 1]
    }

    /// neighbors of `node` at time `t`, ascending by neighbor id
    pub fn neighbors(&self, t: TimeStep, node: NodeId) -> &[(NodeId, ParamId)] {
        &self.adjacency[t - 1][node as usize]
    }

    pub fn label(&self, node: NodeId) -> &str {
        &self.labels[node as usize]
    }

    pub fn node_id(&self, label: &str) -> Option<NodeId> {
        self.ids.get(label).copied()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// number of distinct other nodes this node ever interacts with
    pub fn aggregated_degree(&self, node: NodeId) -> Result<usize> {
        if node as usize >= self.labels.len() {
            return Err(Error::NodeOutOfRange(node));
        }
        let mut seen = BTreeSet::new();
        for e in &self.events {
            if e.u == node {
                seen.insert(e.v);
            } else if e.v == node {
                seen.insert(e.u);
            }
        }
        Ok(seen.len())
    }

    /// serializes back to the contact-list text format (tab separated, one
    /// event per line); re-parsing yields the same labeled event set
    pub fn to_contact_list(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&format!(
                "{}\t{}\t{}\n",
                e.t,
                self.labels[e.u as usize],
                self.labels[e.v as usize]
            ));
        }
        out
    }

    /// the same network with one node (and all its contacts) removed; node
    /// ids are recompacted, the horizon is kept
    pub fn remove_node(&self, node: NodeId) -> Result<TemporalNetwork> {
        if node as usize >= self.labels.len() {
            return Err(Error::NodeOutOfRange(node));
        }
        if self.labels.len() == 1 {
            return Err(Error::InvalidConfig("cannot remove the only node".into()));
        }
        let mut labels = Vec::with_capacity(self.labels.len() - 1);
        let mut remap = vec![u32::MAX; self.labels.len()];
        for (i, l) in self.labels.iter().enumerate() {
            if i as NodeId != node {
                remap[i] = labels.len() as NodeId;
                labels.push(l.clone());
            }
        }
        let events = self
            .events
            .iter()
            .filter(|e| e.u != node && e.v != node)
            .map(|e| (e.t, remap[e.u as usize], remap[e.v as usize]));
        TemporalNetwork::from_events(labels, self.horizon, events)
    }
}

/// how raw timestamps become snapshot indices
#[derive(Debug, Clone)]
pub struct ParseOptions {
    /// width of the aggregation window over raw timestamps; 1 keeps every
    /// distinct timestamp as its own snapshot
    pub window: u64,
    /// subtract the smallest raw timestamp before windowing, so windows align
    /// to the start of the recording instead of to absolute time
    pub rebase: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            window: 1,
            rebase: false,
        }
    }
}

/// what ingestion produced, plus counts of what it had to drop
#[derive(Debug)]
pub struct ParseOutcome {
    pub network: TemporalNetwork,
    pub self_loops_rejected: usize,
    pub duplicates_collapsed: usize,
}

/// parses contact-list text: one `t <sep> u <sep> v` event per line, comma or
/// whitespace separated, `#` lines ignored.
///
/// Raw timestamps are grouped into consecutive windows of `options.window`
/// and the occupied windows become snapshots `1..=T` in time order. Node
/// labels are interned in sorted order.
pub fn parse_contact_list<R: BufRead>(input: R, options: &ParseOptions) -> Result<ParseOutcome> {
    if options.window == 0 {
        return Err(Error::InvalidConfig("window width must be positive".into()));
    }
    let mut raw: Vec<(u64, String, String)> = Vec::new();
    let mut self_loops = 0usize;
    for (idx, line) in input.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::Parse {
            line: lineno,
            msg: e.to_string(),
        })?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = if line.contains(',') {
            line.split(',').map(str::trim).collect()
        } else {
            line.split_whitespace().collect()
        };
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected 3 fields, got {}", fields.len()),
            });
        }
        let t: u64 = fields[0].parse().map_err(|_| Error::Parse {
            line: lineno,
            msg: format!("bad timestamp `{}`", fields[0]),
        })?;
        let (u, v) = (fields[1], fields[2]);
        if u.is_empty() || v.is_empty() {
            return Err(Error::Parse {
                line: lineno,
                msg: "empty node label".into(),
            });
        }
        if u == v {
            self_loops += 1;
            continue;
        }
        raw.push((t, u.to_string(), v.to_string()));
    }
    if raw.is_empty() {
        return Err(Error::EmptyInput);
    }

    let base = if options.rebase {
        raw.iter().map(|r| r.0).min().unwrap_or(0)
    } else {
        0
    };
    let mut windows: BTreeSet<u64> = BTreeSet::new();
    for r in &raw {
        windows.insert((r.0 - base) / options.window);
    }
    let index_of: BTreeMap<u64, TimeStep> = windows
        .iter()
        .enumerate()
        .map(|(i, &w)| (w, i + 1))
        .collect();
    let horizon = windows.len();

    let mut labels: BTreeSet<&str> = BTreeSet::new();
    for r in &raw {
        labels.insert(&r.1);
        labels.insert(&r.2);
    }
    let labels: Vec<String> = labels.into_iter().map(str::to_string).collect();
    let ids: BTreeMap<&str, NodeId> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i as NodeId))
        .collect();

    let triples: Vec<(TimeStep, NodeId, NodeId)> = raw
        .iter()
        .map(|(t, u, v)| {
            (
                index_of[&((t - base) / options.window)],
                ids[u.as_str()],
                ids[v.as_str()],
            )
        })
        .collect();
    let before = {
        let mut probe: Vec<ContactEvent> =
            triples.iter().map(|&(t, a, b)| ContactEvent::new(t, a, b)).collect();
        probe.sort();
        let total = probe.len();
        probe.dedup();
        total - probe.len()
    };
    let network = TemporalNetwork::from_events(labels, horizon, triples)?;
    Ok(ParseOutcome {
        network,
        self_loops_rejected: self_loops,
        duplicates_collapsed: before,
    })
}
