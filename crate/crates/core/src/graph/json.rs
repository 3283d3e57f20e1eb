use super::{Graph, LabelledGraph, Vertex};
use crate::error::GraphError;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Wire form: `{"n", "m", "edges": [["v1","e1"], ...], "vertex_edge_order":
/// {"v1": [0, 1], ...}, "edge_labels": [...]}`; edges are referenced by
/// list index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub m: usize,
    pub edges: Vec<[String; 2]>,
    #[serde(default)]
    pub vertex_edge_order: BTreeMap<String, [usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_labels: Option<Vec<usize>>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> GraphJson {
        GraphJson {
            n: g.n(),
            m: g.m(),
            edges: g
                .edges()
                .map(|(s, t)| [Vertex::Internal(s).to_string(), t.to_string()])
                .collect(),
            vertex_edge_order: (0..g.n())
                .map(|v| (Vertex::Internal(v).to_string(), [2 * v, 2 * v + 1]))
                .collect(),
            edge_labels: None,
        }
    }
}

impl From<&LabelledGraph> for GraphJson {
    fn from(lg: &LabelledGraph) -> GraphJson {
        let mut j = GraphJson::from(lg.graph());
        j.edge_labels = Some(lg.labels().to_vec());
        j
    }
}

impl GraphJson {
    /// Returns the graph and, when `edge_labels` is present, its labelling.
    pub fn to_graph(&self) -> Result<(Graph, Option<LabelledGraph>), GraphError> {
        let mut parsed = Vec::with_capacity(self.edges.len());
        for [s, t] in &self.edges {
            parsed.push((Vertex::parse(s)?, Vertex::parse(t)?));
        }
        let list = super::EdgeList { n: self.n, m: self.m, edges: parsed.clone() };
        let report = super::validate(&list);
        if !report.admissible {
            return Err(GraphError::NotAdmissible(report.violations.join("; ")));
        }
        // edge index in the list for (vertex, slot)
        let mut slots: Vec<[usize; 2]> = vec![[usize::MAX; 2]; self.n];
        for v in 0..self.n {
            let name = Vertex::Internal(v).to_string();
            let own: Vec<usize> = parsed
                .iter()
                .enumerate()
                .filter(|(_, e)| e.0 == Vertex::Internal(v))
                .map(|(i, _)| i)
                .collect();
            slots[v] = match self.vertex_edge_order.get(&name) {
                Some(&[a, b]) => {
                    let mut given = [a, b];
                    given.sort_unstable();
                    if given.to_vec() != own {
                        return Err(GraphError::BadEdgeOrder(format!(
                            "{name} lists edges {a},{b} but owns {own:?}"
                        )));
                    }
                    [a, b]
                }
                None => [own[0], own[1]],
            };
        }
        let targets = slots.iter().map(|s| [parsed[s[0]].1, parsed[s[1]].1]).collect();
        let g = Graph::new(self.n, self.m, targets)?;
        let lg = match &self.edge_labels {
            None => None,
            Some(labels) => {
                if labels.len() != parsed.len() {
                    return Err(GraphError::BadEdgeOrder("edge_labels length".into()));
                }
                let mut own = vec![0usize; 2 * self.n];
                for (v, s) in slots.iter().enumerate() {
                    own[2 * v] = labels[s[0]];
                    own[2 * v + 1] = labels[s[1]];
                }
                Some(LabelledGraph::new(g.clone(), own)?)
            }
        };
        Ok((g, lg))
    }
}
