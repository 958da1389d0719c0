//! Undirected edge geography (UEG) and its encoding into the logic.
//!
//! In a UEG game two players alternately move a token along edges of an
//! undirected graph, starting from a distinguished root node. Each move
//! must traverse an edge that no earlier move has used; a player with no
//! such edge available loses. [`ueg_winner`] decides the game by exhaustive
//! search, [`induced_model`] and [`induced_formula`] translate a rooted
//! graph into a model-checking instance whose verdict encodes the same
//! question, and [`reduction_check`] runs both routes and compares them.

use std::collections::HashMap;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::checker;
use crate::model::ModelError;
use crate::syntax::{InvalidToken, NodeId, WorldId};

mod induced;

pub use induced::{induced_formula, induced_model, InducedModel};

/// Why a rooted graph could not be constructed or loaded.
#[derive(Debug, thiserror::Error)]
pub enum GraphError {
    /// The JSON text did not have the expected shape.
    #[error("malformed graph document: {0}")]
    Format(String),
    /// The node list was empty.
    #[error("a rooted graph needs at least one node")]
    NoNodes,
    /// An edge endpoint or the root is not a declared node.
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    /// An edge connected a node to itself.
    #[error("self-loop on node {0} is not allowed")]
    SelfLoop(NodeId),
    /// A node name contained characters outside `[A-Za-z0-9_]`.
    #[error(transparent)]
    InvalidToken(#[from] InvalidToken),
}

/// A finite undirected graph without self-loops, plus a start node.
///
/// Edges are unordered pairs of distinct nodes, stored with their endpoints
/// sorted so that each pair has one canonical representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedGraph {
    nodes: BTreeSet<NodeId>,
    edges: BTreeSet<(NodeId, NodeId)>,
    root: NodeId,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    nodes: Vec<String>,
    edges: Vec<(String, String)>,
    root: String,
}

impl RootedGraph {
    /// Builds a validated rooted graph.
    ///
    /// Edge endpoints may come in either order; duplicates collapse. The
    /// root and every endpoint must be listed in `nodes`, and self-loops
    /// are rejected.
    pub fn new(
        nodes: impl IntoIterator<Item = NodeId>,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
        root: NodeId,
    ) -> Result<Self, GraphError> {
        let nodes: BTreeSet<NodeId> = nodes.into_iter().collect();
        if nodes.is_empty() {
            return Err(GraphError::NoNodes);
        }
        if !nodes.contains(&root) {
            return Err(GraphError::UnknownNode(root));
        }
        let mut edge_set = BTreeSet::new();
        for (a, b) in edges {
            for end in [&a, &b] {
                if !nodes.contains(end) {
                    return Err(GraphError::UnknownNode(end.clone()));
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            let pair = if a <= b { (a, b) } else { (b, a) };
            edge_set.insert(pair);
        }
        Ok(RootedGraph {
            nodes,
            edges: edge_set,
            root,
        })
    }

    /// The nodes, in sorted order.
    pub fn nodes(&self) -> &BTreeSet<NodeId> {
        &self.nodes
    }

    /// The edges as canonically ordered pairs, in sorted order.
    pub fn edges(&self) -> &BTreeSet<(NodeId, NodeId)> {
        &self.edges
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// The start node of the game.
    pub fn root(&self) -> &NodeId {
        &self.root
    }

    /// Loads a graph from its JSON form:
    /// `{"nodes": ["u", ...], "edges": [["u", "v"], ...], "root": "u"}`.
    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let doc: GraphDoc =
            serde_json::from_str(text).map_err(|e| GraphError::Format(e.to_string()))?;
        let nodes = doc
            .nodes
            .into_iter()
            .map(NodeId::new)
            .collect::<Result<Vec<_>, _>>()?;
        let edges = doc
            .edges
            .into_iter()
            .map(|(a, b)| Ok::<_, InvalidToken>((NodeId::new(a)?, NodeId::new(b)?)))
            .collect::<Result<Vec<_>, _>>()?;
        RootedGraph::new(nodes, edges, NodeId::new(doc.root)?)
    }

    /// Renders the graph back to the JSON form accepted by [`from_json`].
    ///
    /// [`from_json`]: RootedGraph::from_json
    pub fn to_json(&self) -> String {
        let doc = GraphDoc {
            nodes: self.nodes.iter().map(|n| n.to_string()).collect(),
            edges: self
                .edges
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            root: self.root.to_string(),
        };
        let mut text = serde_json::to_string_pretty(&doc).expect("graph document serializes");
        text.push('\n');
        text
    }

    /// The root's name reused as a world of the translated model.
    pub fn root_world(&self) -> WorldId {
        WorldId::new(self.root.to_string()).expect("node names are valid world names")
    }
}

/// The player with the winning strategy in a UEG game.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Player {
    /// The first mover.
    One,
    /// The second mover.
    Two,
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::One => write!(f, "player I"),
            Player::Two => write!(f, "player II"),
        }
    }
}

/// Decides who has a winning strategy in the UEG game on `g`.
///
/// The game tree is searched exhaustively: the player to move picks any
/// not-yet-used edge at the token's node, the edge is spent, the token
/// crosses it, and the turn passes; a player who cannot move loses. Results
/// are memoized per (set of spent edges, token position).
///
/// # Panics
///
/// Panics if the graph has more than 128 edges; the exhaustive search is a
/// small-instance oracle and spent edges are tracked in a 128-bit mask.
pub fn ueg_winner(g: &RootedGraph) -> Player {
    let index: BTreeMap<&NodeId, u32> = g
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (n, i as u32))
        .collect();
    let edges: Vec<(u32, u32)> = g.edges.iter().map(|(a, b)| (index[a], index[b])).collect();
    assert!(
        edges.len() <= 128,
        "the exhaustive game solver handles at most 128 edges"
    );
    let mut memo: HashMap<(u128, u32), bool> = HashMap::new();
    if mover_wins(index[&g.root], 0, &edges, &mut memo) {
        Player::One
    } else {
        Player::Two
    }
}

/// True when the player about to move from `at` (with `spent` edges gone)
/// has a winning strategy.
fn mover_wins(
    at: u32,
    spent: u128,
    edges: &[(u32, u32)],
    memo: &mut HashMap<(u128, u32), bool>,
) -> bool {
    if let Some(&won) = memo.get(&(spent, at)) {
        return won;
    }
    let mut won = false;
    for (i, &(a, b)) in edges.iter().enumerate() {
        if spent & (1 << i) != 0 {
            continue;
        }
        let next = match (a == at, b == at) {
            (true, _) => b,
            (_, true) => a,
            _ => continue,
        };
        if !mover_wins(next, spent | (1 << i), edges, memo) {
            won = true;
            break;
        }
    }
    memo.insert((spent, at), won);
    won
}

/// Which quantifier family carries the game translation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionVariant {
    /// Moves are made by gaining skills (`[+*]` / `<+*>`).
    BoxPlus,
    /// Moves are made by shedding skills (`[-*]` / `<-*>`); the translated
    /// model starts every agent with the skill of every node pair.
    BoxMinus,
    /// Moves are made by replacing skills outright (`[=*]` / `<=*>`).
    BoxAssign,
}

impl fmt::Display for ReductionVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionVariant::BoxPlus => write!(f, "plus"),
            ReductionVariant::BoxMinus => write!(f, "minus"),
            ReductionVariant::BoxAssign => write!(f, "box"),
        }
    }
}

/// Outcome of running both routes to the UEG verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionReport {
    /// Winner according to the exhaustive game solver.
    pub winner: Player,
    /// Whether the translated formula holds at the root world of the
    /// translated model.
    pub logic_holds: bool,
    /// True when the two routes agree: `logic_holds` iff player I wins.
    pub agree: bool,
}

/// Why a reduction check was refused or failed.
#[derive(Debug, thiserror::Error)]
pub enum UegError {
    /// The graph is too large for the doubly exponential formula route.
    #[error(
        "graph has {count} edges, over the limit of {limit} for the translated \
         formula (each extra edge multiplies the nested quantifier work); \
         raise the limit explicitly to force the check"
    )]
    TooManyEdges {
        /// Edges in the offending graph.
        count: usize,
        /// The limit that was in force.
        limit: usize,
    },
    /// Evaluating the translated instance failed.
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Default edge limit for [`reduction_check`].
///
/// Evaluating the translated formula costs on the order of
/// `(2^(edges+1))^agents` subset choices, so each extra edge roughly
/// squares the work; five edges keep the check near-instant.
pub const DEFAULT_EDGE_LIMIT: usize = 5;

/// Solves the game directly and through the logic, with the default edge
/// limit of [`DEFAULT_EDGE_LIMIT`].
pub fn reduction_check(
    g: &RootedGraph,
    variant: ReductionVariant,
) -> Result<ReductionReport, UegError> {
    reduction_check_with(g, variant, DEFAULT_EDGE_LIMIT)
}

/// Solves the game by exhaustive search, translates the same rooted graph
/// into a model and formula, model-checks the formula at the root world,
/// and reports whether the verdicts agree.
///
/// Graphs with more than `edge_limit` edges are refused rather than left
/// to run for hours: the translated formula nests one quantifier per
/// agent, each ranging over all nonempty subsets of the edge skills.
pub fn reduction_check_with(
    g: &RootedGraph,
    variant: ReductionVariant,
    edge_limit: usize,
) -> Result<ReductionReport, UegError> {
    if g.edge_count() > edge_limit {
        return Err(UegError::TooManyEdges {
            count: g.edge_count(),
            limit: edge_limit,
        });
    }
    let winner = ueg_winner(g);
    let translated = induced_model(g, variant);
    let formula = induced_formula(g, variant);
    let logic_holds = checker::holds(&translated.model, &g.root_world(), &formula)?;
    let agree = (winner == Player::One) == logic_holds;
    Ok(ReductionReport {
        winner,
        logic_holds,
        agree,
    })
}
