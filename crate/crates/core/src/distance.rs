//! The 5n-node visibility graph and the flow-weighted objective.
//!
//! Every placed cell contributes five nodes: its four corners and its door.
//! Within a cell, travel is allowed along the boundary only: adjacent
//! corners connect at the edge length, the door connects to its two
//! neighbouring corners at half the door-edge length, and direct movement
//! between opposite corners (or door to a far corner) is forbidden. Between
//! cells, any node pair connects by a straight edge iff the segment stays
//! clear of every cell's buffered interior. All-pairs shortest distances
//! come from a Floyd–Warshall closure; the objective sums flow-weighted
//! door-to-door distances over ordered cell pairs.

use crate::encoding::{decode, Chromosome};
use crate::geometry::{segment_crosses_interior, Point, Segment};
use crate::instance::Instance;
use crate::layout::Layout;

/// Distance value marking an unreachable node pair.
pub const UNREACHABLE: f64 = f64::INFINITY;

/// Node kinds per cell, in flat-index order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Corner1,
    Corner2,
    Corner3,
    Corner4,
    Door,
}

/// A node of the visibility graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeId {
    pub cell: usize,
    pub kind: NodeKind,
}

impl NodeId {
    pub fn flat(&self) -> usize {
        self.cell * 5
            + match self.kind {
                NodeKind::Corner1 => 0,
                NodeKind::Corner2 => 1,
                NodeKind::Corner3 => 2,
                NodeKind::Corner4 => 3,
                NodeKind::Door => 4,
            }
    }

    pub fn from_flat(index: usize) -> NodeId {
        let kind = match index % 5 {
            0 => NodeKind::Corner1,
            1 => NodeKind::Corner2,
            2 => NodeKind::Corner3,
            3 => NodeKind::Corner4,
            _ => NodeKind::Door,
        };
        NodeId {
            cell: index / 5,
            kind,
        }
    }
}

/// Flat index of a cell's door node.
pub fn door_index(cell: usize) -> usize {
    cell * 5 + 4
}

/// Non-negative inter-cell flows with zero diagonal.
pub type FlowMatrix = Vec<Vec<f64>>;

/// Dense symmetric edge-weight matrix over the 5n nodes; `UNREACHABLE`
/// marks absent edges.
#[derive(Debug, Clone)]
pub struct AdjacencyGraph {
    pub n_nodes: usize,
    weights: Vec<f64>,
    /// Node coordinates in flat-index order.
    pub positions: Vec<Point>,
}

impl AdjacencyGraph {
    pub fn weight(&self, u: usize, v: usize) -> f64 {
        self.weights[u * self.n_nodes + v]
    }

    fn set(&mut self, u: usize, v: usize, w: f64) {
        self.weights[u * self.n_nodes + v] = w;
        self.weights[v * self.n_nodes + u] = w;
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.weight(u, v) != UNREACHABLE
    }
}

/// Build the feasible-edge graph for a layout.
///
/// `buffer` is the interior shrink used by the crossing test; see
/// [`EvalConfig::for_instance`] for the default tied to instance scale.
pub fn build_adjacency(layout: &Layout, buffer: f64) -> AdjacencyGraph {
    let n = layout.len();
    let n_nodes = 5 * n;

    let mut positions = Vec::with_capacity(n_nodes);
    let mut rects = Vec::with_capacity(n);
    for cell in 0..n {
        let nodes = layout.nodes(cell);
        positions.extend_from_slice(&nodes.corners);
        positions.push(nodes.door);
        rects.push(layout.rect(cell));
    }

    let mut graph = AdjacencyGraph {
        n_nodes,
        weights: vec![UNREACHABLE; n_nodes * n_nodes],
        positions,
    };
    for u in 0..n_nodes {
        graph.set(u, u, 0.0);
    }

    // Intra-cell boundary corridors.
    for cell in 0..n {
        let base = cell * 5;
        let corners = &graph.positions[base..base + 4];
        let door = graph.positions[base + 4];

        let top = corners[0].distance(&corners[1]);
        let right = corners[1].distance(&corners[2]);
        let bottom = corners[2].distance(&corners[3]);
        let left = corners[3].distance(&corners[0]);
        let edges = [(0, 1, top), (1, 2, right), (2, 3, bottom), (3, 0, left)];

        let half_t = layout.specs[cell].t * 0.5;
        let (door_a, door_b) = match layout.placements[cell].door_side {
            crate::layout::DoorSide::Below => (2, 3),
            crate::layout::DoorSide::Right => (1, 2),
            crate::layout::DoorSide::Above => (0, 1),
            crate::layout::DoorSide::Left => (3, 0),
        };
        debug_assert!((door.distance(&corners[door_a]) - half_t).abs() <= 1e-9 * half_t.max(1.0));

        for (a, b, w) in edges {
            graph.set(base + a, base + b, w);
        }
        graph.set(base + door_a, base + 4, half_t);
        graph.set(base + door_b, base + 4, half_t);
    }

    // Inter-cell edges: straight segments clear of every buffered interior.
    for u in 0..n_nodes {
        for v in (u + 1)..n_nodes {
            if u / 5 == v / 5 {
                continue;
            }
            let seg = Segment::new(graph.positions[u], graph.positions[v]);
            let blocked = rects
                .iter()
                .any(|rect| segment_crosses_interior(&seg, rect, buffer));
            if !blocked {
                graph.set(u, v, seg.length());
            }
        }
    }

    graph
}

/// Shortest-path closure over a graph, with next-hop data for path
/// reconstruction.
#[derive(Debug, Clone)]
pub struct ShortestPaths {
    pub n_nodes: usize,
    dist: Vec<f64>,
    next: Vec<u32>,
}

const NO_HOP: u32 = u32::MAX;

impl ShortestPaths {
    pub fn distance(&self, u: usize, v: usize) -> f64 {
        self.dist[u * self.n_nodes + v]
    }

    pub fn is_reachable(&self, u: usize, v: usize) -> bool {
        self.distance(u, v) != UNREACHABLE
    }

    /// Node sequence of one shortest path from `u` to `v`, inclusive of both
    /// endpoints, or `None` when unreachable.
    pub fn path(&self, u: usize, v: usize) -> Option<Vec<usize>> {
        if !self.is_reachable(u, v) {
            return None;
        }
        let mut path = vec![u];
        let mut cur = u;
        while cur != v {
            let hop = self.next[cur * self.n_nodes + v];
            if hop == NO_HOP {
                return None;
            }
            cur = hop as usize;
            path.push(cur);
        }
        Some(path)
    }
}

/// Floyd–Warshall over the dense adjacency.
pub fn all_pairs_shortest(graph: &AdjacencyGraph) -> ShortestPaths {
    let n = graph.n_nodes;
    let mut dist = graph.weights.clone();
    let mut next = vec![NO_HOP; n * n];
    for u in 0..n {
        for v in 0..n {
            if u == v || dist[u * n + v] != UNREACHABLE {
                next[u * n + v] = v as u32;
            }
        }
    }

    for k in 0..n {
        for i in 0..n {
            let dik = dist[i * n + k];
            if dik == UNREACHABLE {
                continue;
            }
            for j in 0..n {
                let through = dik + dist[k * n + j];
                if through < dist[i * n + j] {
                    dist[i * n + j] = through;
                    next[i * n + j] = next[i * n + k];
                }
            }
        }
    }

    ShortestPaths {
        n_nodes: n,
        dist,
        next,
    }
}

/// Flow-weighted sum of door-to-door distances over ordered cell pairs.
/// Unreachable pairs with positive flow contribute `flow × penalty`.
pub fn objective(paths: &ShortestPaths, flows: &FlowMatrix, unreachable_penalty: f64) -> f64 {
    let n = flows.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            let f = flows[i][j];
            if f == 0.0 {
                continue;
            }
            let d = paths.distance(door_index(i), door_index(j));
            total += f * if d == UNREACHABLE { unreachable_penalty } else { d };
        }
    }
    total
}

/// Scale-aware parameters of one fitness evaluation.
#[derive(Debug, Clone, Copy)]
pub struct EvalConfig {
    /// Interior shrink for the crossing test.
    pub buffer: f64,
    /// Distance charged per unit flow between unreachable doors.
    pub unreachable_penalty: f64,
}

impl EvalConfig {
    /// Defaults tied to the instance's characteristic size: buffer at 1e-7
    /// of the bounding diagonal, penalty at 1e6 times it.
    pub fn for_instance(instance: &Instance) -> EvalConfig {
        let diag = instance.bbox_diagonal();
        EvalConfig {
            buffer: 1e-7 * diag,
            unreachable_penalty: 1e6 * diag,
        }
    }
}

/// Objective of an already decoded layout.
pub fn evaluate_layout(layout: &Layout, flows: &FlowMatrix, config: &EvalConfig) -> f64 {
    let graph = build_adjacency(layout, config.buffer);
    let paths = all_pairs_shortest(&graph);
    objective(&paths, flows, config.unreachable_penalty)
}

/// Full fitness pipeline: decode, build the graph, close distances, sum the
/// objective. Deterministic in all inputs; lower is better.
pub fn evaluate(chromosome: &Chromosome, instance: &Instance, config: &EvalConfig) -> f64 {
    let layout = decode(chromosome, instance);
    evaluate_layout(&layout, &instance.flows, config)
}
