//! Mixed stochastic/deterministic networks, their text format, and
//! moralization.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{edge, Edge, UGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown parent `{name}`")]
    UnknownParent { line: usize, name: String },
    #[error("duplicate vertex name `{0}`")]
    DuplicateName(String),
    #[error("vertex `{0}` has cardinality 0")]
    ZeroCardinality(String),
    #[error("invalid name `{0}`")]
    BadName(String),
    #[error("vertex `{0}` lists a parent twice or itself")]
    BadParents(String),
    #[error("parent id {0} out of range")]
    ParentOutOfRange(usize),
    #[error("directed cycle through `{0}`")]
    Cycle(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub name: String,
    pub cardinality: u64,
    pub deterministic: bool,
    pub observed: bool,
    pub parents: Vec<usize>,
}

impl Vertex {
    pub fn stochastic(name: impl Into<String>, cardinality: u64) -> Self {
        Vertex {
            name: name.into(),
            cardinality,
            deterministic: false,
            observed: false,
            parents: Vec::new(),
        }
    }

    pub fn deterministic(name: impl Into<String>, cardinality: u64) -> Self {
        Vertex {
            deterministic: true,
            ..Vertex::stochastic(name, cardinality)
        }
    }

    pub fn with_parents(mut self, parents: impl IntoIterator<Item = usize>) -> Self {
        self.parents = parents.into_iter().collect();
        self
    }

    pub fn observed(mut self) -> Self {
        self.observed = true;
        self
    }
}

/// A validated DAG of vertices. Vertex ids are positions in `vertices()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    name: String,
    vertices: Vec<Vertex>,
}

fn valid_token(s: &str) -> bool {
    !s.is_empty() && s != "|" && !s.chars().any(|c| c.is_whitespace() || c == '#')
}

impl Network {
    pub fn new(name: impl Into<String>, vertices: Vec<Vertex>) -> Result<Self, ModelError> {
        let name = name.into();
        if !valid_token(&name) {
            return Err(ModelError::BadName(name));
        }
        let n = vertices.len();
        let mut names = HashMap::with_capacity(n);
        for (id, v) in vertices.iter().enumerate() {
            if !valid_token(&v.name) {
                return Err(ModelError::BadName(v.name.clone()));
            }
            if names.insert(v.name.as_str(), id).is_some() {
                return Err(ModelError::DuplicateName(v.name.clone()));
            }
            if v.cardinality == 0 {
                return Err(ModelError::ZeroCardinality(v.name.clone()));
            }
            let mut seen = vec![false; n];
            for &p in &v.parents {
                if p >= n {
                    return Err(ModelError::ParentOutOfRange(p));
                }
                if p == id || seen[p] {
                    return Err(ModelError::BadParents(v.name.clone()));
                }
                seen[p] = true;
            }
        }
        let net = Network { name, vertices };
        net.check_acyclic()?;
        Ok(net)
    }

    fn check_acyclic(&self) -> Result<(), ModelError> {
        let n = self.vertices.len();
        let mut pending: Vec<usize> = self.vertices.iter().map(|v| v.parents.len()).collect();
        let children = self.children();
        let mut stack: Vec<usize> = (0..n).filter(|&v| pending[v] == 0).collect();
        let mut done = 0;
        while let Some(v) = stack.pop() {
            done += 1;
            for &c in &children[v] {
                pending[c] -= 1;
                if pending[c] == 0 {
                    stack.push(c);
                }
            }
        }
        match (0..n).find(|&v| pending[v] > 0) {
            Some(v) if done < n => Err(ModelError::Cycle(self.vertices[v].name.clone())),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, id: usize) -> &Vertex {
        &self.vertices[id]
    }

    pub fn parents(&self, id: usize) -> &[usize] {
        &self.vertices[id].parents
    }

    pub fn is_deterministic(&self, id: usize) -> bool {
        self.vertices[id].deterministic
    }

    pub fn cardinality(&self, id: usize) -> u64 {
        self.vertices[id].cardinality
    }

    pub fn id_of(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.name == name)
    }

    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertices.len()];
        for (c, v) in self.vertices.iter().enumerate() {
            for &p in &v.parents {
                out[p].push(c);
            }
        }
        out
    }

    pub fn is_parent_of(&self, parent: usize, child: usize) -> bool {
        self.vertices[child].parents.contains(&parent)
    }

    pub fn deterministic_count(&self) -> usize {
        self.vertices.iter().filter(|v| v.deterministic).count()
    }
}

/// Parses the line-based network format.
pub fn parse_network(text: &str) -> Result<Network, ModelError> {
    let mut name = None;
    let mut vertices: Vec<Vertex> = Vec::new();
    let mut ids: HashMap<String, usize> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |msg: &str| ModelError::Syntax {
            line: line_no,
            msg: msg.to_string(),
        };
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("net") => {
                if name.is_some() {
                    return Err(syntax("repeated `net` header"));
                }
                let n = tokens
                    .next()
                    .ok_or_else(|| syntax("missing network name"))?;
                if tokens.next().is_some() {
                    return Err(syntax("trailing tokens after network name"));
                }
                name = Some(n.to_string());
            }
            Some("var") => {
                if name.is_none() {
                    return Err(syntax("`var` before `net` header"));
                }
                let vname = tokens.next().ok_or_else(|| syntax("missing vertex name"))?;
                let card = tokens.next().ok_or_else(|| syntax("missing cardinality"))?;
                let card: u64 = card
                    .parse()
                    .map_err(|_| syntax("cardinality is not an integer"))?;
                let flags = tokens.next().ok_or_else(|| syntax("missing flags"))?;
                let mut vertex = Vertex::stochastic(vname, card);
                if flags != "-" {
                    for flag in flags.split(',') {
                        match flag {
                            "det" if !vertex.deterministic => vertex.deterministic = true,
                            "obs" if !vertex.observed => vertex.observed = true,
                            _ => return Err(syntax(&format!("bad flag `{flag}`"))),
                        }
                    }
                }
                match tokens.next() {
                    None => {}
                    Some("|") => {
                        for p in tokens.by_ref() {
                            let pid = *ids.get(p).ok_or_else(|| ModelError::UnknownParent {
                                line: line_no,
                                name: p.to_string(),
                            })?;
                            if vertex.parents.contains(&pid) {
                                return Err(ModelError::BadParents(vname.to_string()));
                            }
                            vertex.parents.push(pid);
                        }
                    }
                    Some(_) => return Err(syntax("expected `|` before parents")),
                }
                if card == 0 {
                    return Err(ModelError::ZeroCardinality(vname.to_string()));
                }
                if ids.insert(vname.to_string(), vertices.len()).is_some() {
                    return Err(ModelError::DuplicateName(vname.to_string()));
                }
                vertices.push(vertex);
            }
            Some(other) => return Err(syntax(&format!("unknown directive `{other}`"))),
            None => unreachable!(),
        }
    }
    let name = name.ok_or(ModelError::Syntax {
        line: 1,
        msg: "missing `net` header".into(),
    })?;
    Network::new(name, vertices)
}

/// Writes a network in the format read by [`parse_network`].
///
/// Vertices are emitted in id order, which is only a valid declaration
/// order when every parent precedes its child; networks built by the parser
/// and the generator always satisfy this.
pub fn serialize_network(net: &Network) -> String {
    let mut out = String::new();
    writeln!(out, "net {}", net.name).unwrap();
    for v in &net.vertices {
        let flags = match (v.deterministic, v.observed) {
            (false, false) => "-",
            (true, false) => "det",
            (false, true) => "obs",
            (true, true) => "det,obs",
        };
        write!(out, "var {} {} {}", v.name, v.cardinality, flags).unwrap();
        if !v.parents.is_empty() {
            out.push_str(" |");
            for &p in &v.parents {
                write!(out, " {}", net.vertices[p].name).unwrap();
            }
        }
        out.push('\n');
    }
    out
}

/// Why an undirected edge of the moral graph exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeTag {
    /// One endpoint is a parent of the other.
    DirectedChild,
    /// The endpoints share a child.
    Moral,
    Both,
}

#[derive(Debug, Clone)]
pub struct MoralGraph {
    pub graph: UGraph,
    pub provenance: BTreeMap<Edge, EdgeTag>,
}

pub fn moralize(net: &Network) -> MoralGraph {
    let mut graph = UGraph::new(net.len());
    let mut provenance: BTreeMap<Edge, EdgeTag> = BTreeMap::new();
    let mut tag = |e: Edge, t: EdgeTag| {
        provenance
            .entry(e)
            .and_modify(|cur| {
                if *cur != t {
                    *cur = EdgeTag::Both;
                }
            })
            .or_insert(t);
    };
    for (c, v) in net.vertices.iter().enumerate() {
        for (i, &p) in v.parents.iter().enumerate() {
            graph.add_edge(p, c).expect("validated network");
            tag(edge(p, c), EdgeTag::DirectedChild);
            for &q in &v.parents[i + 1..] {
                graph.add_edge(p, q).expect("validated network");
                tag(edge(p, q), EdgeTag::Moral);
            }
        }
    }
    MoralGraph { graph, provenance }
}
