//! JSON node list of an expression DAG.

use std::collections::HashMap;

use ctest_core::expr::Kind;
use ctest_core::Expr;
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct Ref {
    pub id: usize,
    pub inverted: bool,
}

#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NodeDump {
    Lit { id: usize, len: String, word: String },
    Cat { id: usize, len: String, children: Vec<Ref> },
    Pow { id: usize, len: String, base: Ref, k: u64 },
}

/// Nodes are numbered in post-order, so every reference points backwards.
#[derive(Debug, Serialize)]
pub struct DagDump {
    pub root: Ref,
    pub nodes: Vec<NodeDump>,
}

pub fn dump(e: &Expr) -> DagDump {
    let mut ids = HashMap::new();
    let mut nodes = Vec::new();
    let root = visit(e, &mut ids, &mut nodes);
    DagDump { root, nodes }
}

fn visit(e: &Expr, ids: &mut HashMap<usize, usize>, nodes: &mut Vec<NodeDump>) -> Ref {
    let inverted = e.is_inverted();
    if let Some(&id) = ids.get(&e.node_id()) {
        return Ref { id, inverted };
    }
    // lengths are orientation-independent
    let len = e.len().to_string();
    let node = match e.kind() {
        Kind::Lit(w) => NodeDump::Lit { id: 0, len, word: w.to_string() },
        Kind::Cat(children) => {
            let children = children.iter().map(|c| visit(c, ids, nodes)).collect();
            NodeDump::Cat { id: 0, len, children }
        }
        Kind::Pow(base, k) => NodeDump::Pow { id: 0, len, base: visit(base, ids, nodes), k: *k },
    };
    let id = nodes.len();
    nodes.push(match node {
        NodeDump::Lit { len, word, .. } => NodeDump::Lit { id, len, word },
        NodeDump::Cat { len, children, .. } => NodeDump::Cat { id, len, children },
        NodeDump::Pow { len, base, k, .. } => NodeDump::Pow { id, len, base, k },
    });
    ids.insert(e.node_id(), id);
    Ref { id, inverted }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ctest_core::construct::build_w2;

    #[test]
    fn shared_nodes_appear_once() {
        let w2 = build_w2(&Expr::generator(1), &Expr::generator(2));
        let d = dump(&w2);
        assert_eq!(d.nodes.len(), w2.node_count());
        assert_eq!(d.root.id, d.nodes.len() - 1);
        let json = serde_json::to_value(&d).unwrap();
        assert_eq!(json["nodes"][d.root.id]["len"], "115200");
    }
}
