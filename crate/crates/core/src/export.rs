//! Deterministic graph writers. Every output ends with a newline.

use serde::Serialize;

use crate::graph::LevelGraph;

#[derive(Serialize)]
struct JsonNode {
    id: usize,
    repr: String,
    members: Vec<String>,
}

#[derive(Serialize)]
struct JsonGraph {
    mode: String,
    level: u32,
    nodes: Vec<JsonNode>,
    edges: Vec<[usize; 2]>,
}

/// `{mode, level, nodes: [{id, repr, members}], edges: [[i, j]]}`.
pub fn to_json(g: &LevelGraph) -> String {
    let doc = JsonGraph {
        mode: g.mode.to_string(),
        level: g.level,
        nodes: g
            .nodes
            .iter()
            .map(|n| JsonNode {
                id: n.id,
                repr: n.label(g.n_parts),
                members: n.members(g.n_parts),
            })
            .collect(),
        edges: g.edges.iter().map(|&(i, j)| [i, j]).collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("graph serializes");
    out.push('\n');
    out
}

pub fn to_dot(g: &LevelGraph) -> String {
    let mut out = String::from("graph level_graph {\n");
    for n in &g.nodes {
        out.push_str(&format!(
            "  v{} [label=\"{}\"];\n",
            n.id,
            n.label(g.n_parts)
        ));
    }
    for &(i, j) in &g.edges {
        out.push_str(&format!("  v{i} -- v{j};\n"));
    }
    out.push_str("}\n");
    out
}

pub fn to_graphml(g: &LevelGraph) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
    out.push_str("  <key id=\"repr\" for=\"node\" attr.name=\"repr\" attr.type=\"string\"/>\n");
    out.push_str("  <graph id=\"G\" edgedefault=\"undirected\">\n");
    for n in &g.nodes {
        out.push_str(&format!(
            "    <node id=\"v{}\"><data key=\"repr\">{}</data></node>\n",
            n.id,
            xml_escape(&n.label(g.n_parts))
        ));
    }
    for &(i, j) in &g.edges {
        out.push_str(&format!("    <edge source=\"v{i}\" target=\"v{j}\"/>\n"));
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

/// Edge list with a `source,target` header.
pub fn to_csv(g: &LevelGraph) -> String {
    let mut out = String::from("source,target\n");
    for &(i, j) in &g.edges {
        out.push_str(&format!("{i},{j}\n"));
    }
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
