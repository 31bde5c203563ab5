//! JSON file formats: list-colouring instances, colourings and path
//! instances. Colour ids in files are arbitrary `u32`; instances with ids
//! beyond the in-memory capacity are compacted order-preservingly on load
//! and translated back on output.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::colour::{Colour, ColourSet};
use crate::error::{GraphError, LoadError, ModelError};
use crate::graph::{realize, FamilySpec, Graph};
use crate::lists::{FoldColouring, ListAssignment};
use crate::path::PathInstance;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphSource {
    Family(FamilySpec),
    Explicit(Graph),
}

impl GraphSource {
    pub fn graph(&self) -> Result<Graph, GraphError> {
        match self {
            GraphSource::Family(spec) => realize(spec),
            GraphSource::Explicit(g) => Ok(g.clone()),
        }
    }

    pub fn family(&self) -> Option<&FamilySpec> {
        match self {
            GraphSource::Family(spec) => Some(spec),
            GraphSource::Explicit(_) => None,
        }
    }
}

/// `{"graph": ..., "a": 4, "lists": {"0": [1,2,3,4], ...}}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub graph: GraphSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<usize>,
    pub lists: BTreeMap<String, Vec<u32>>,
}

/// `{"graph": ..., "b": 2, "chosen": {"0": [1,2], ...}}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColouringFile {
    pub graph: GraphSource,
    pub b: usize,
    pub chosen: BTreeMap<String, Vec<u32>>,
}

/// Order-preserving relabelling between file colour ids and `0..k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColourMap {
    /// `None` when file ids are used directly.
    original: Option<Vec<u32>>,
}

impl ColourMap {
    pub fn identity() -> Self {
        ColourMap { original: None }
    }

    pub fn is_identity(&self) -> bool {
        self.original.is_none()
    }

    fn compacting(ids: &BTreeSet<u32>) -> Result<Self, ModelError> {
        if ids.len() > ColourSet::CAPACITY as usize {
            return Err(ModelError::InvalidParams(format!(
                "{} distinct colours; at most {} are supported",
                ids.len(),
                ColourSet::CAPACITY
            )));
        }
        Ok(ColourMap { original: Some(ids.iter().copied().collect()) })
    }

    fn encode(&self, id: u32) -> Result<Colour, ModelError> {
        match &self.original {
            None => Ok(Colour(id)),
            Some(orig) => orig
                .binary_search(&id)
                .map(|i| Colour(i as u32))
                .map_err(|_| ModelError::ColourOutOfRange(id)),
        }
    }

    pub fn encode_set(&self, ids: &[u32]) -> Result<ColourSet, ModelError> {
        let mut out = ColourSet::empty();
        for &id in ids {
            let c = self.encode(id)?;
            if c.0 >= ColourSet::CAPACITY {
                return Err(ModelError::ColourOutOfRange(id));
            }
            if out.contains(c) {
                return Err(ModelError::InvalidParams(format!("duplicate colour {id} in a list")));
            }
            out.insert(c);
        }
        Ok(out)
    }

    pub fn decode_set(&self, set: ColourSet) -> Vec<u32> {
        match &self.original {
            None => set.iter().map(|c| c.0).collect(),
            Some(orig) => set.iter().map(|c| orig[c.0 as usize]).collect(),
        }
    }
}

/// A loaded instance in internal form.
#[derive(Clone, Debug)]
pub struct Instance {
    pub source: GraphSource,
    pub graph: Graph,
    pub lists: ListAssignment,
    pub colours: ColourMap,
}

impl InstanceFile {
    pub fn load(&self) -> Result<Instance, LoadError> {
        let graph = self.graph.graph()?;
        let n = graph.vertex_count();
        let mut by_vertex: Vec<Option<&Vec<u32>>> = vec![None; n];
        for (key, list) in &self.lists {
            let v: usize = key
                .parse()
                .map_err(|_| ModelError::DomainMismatch(format!("list key {key:?} is not a vertex id")))?;
            if v >= n {
                return Err(ModelError::DomainMismatch(format!("list for vertex {v}, graph has {n} vertices")).into());
            }
            by_vertex[v] = Some(list);
        }
        if let Some(v) = by_vertex.iter().position(Option::is_none) {
            return Err(ModelError::DomainMismatch(format!("no list for vertex {v}")).into());
        }
        let ids: BTreeSet<u32> = self.lists.values().flatten().copied().collect();
        let colours = if ids.last().is_some_and(|&max| max >= ColourSet::CAPACITY) {
            ColourMap::compacting(&ids)?
        } else {
            ColourMap::identity()
        };
        let sets = by_vertex
            .into_iter()
            .map(|l| colours.encode_set(l.expect("checked above")))
            .collect::<Result<Vec<_>, _>>()?;
        let lists = match self.a {
            Some(a) => ListAssignment::uniform(sets, a)?,
            None => ListAssignment::reduced(sets),
        };
        Ok(Instance { source: self.graph.clone(), graph, lists, colours })
    }

    pub fn from_lists(source: GraphSource, lists: &ListAssignment) -> Self {
        InstanceFile {
            graph: source,
            a: lists.declared_width(),
            lists: keyed(lists.lists().iter().map(|l| l.iter().map(|c| c.0).collect())),
        }
    }
}

impl Instance {
    pub fn to_file(&self) -> InstanceFile {
        InstanceFile {
            graph: self.source.clone(),
            a: self.lists.declared_width(),
            lists: keyed(self.lists.lists().iter().map(|l| self.colours.decode_set(*l))),
        }
    }

    pub fn colouring_file(&self, phi: &FoldColouring) -> ColouringFile {
        ColouringFile {
            graph: self.source.clone(),
            b: phi.fold,
            chosen: keyed(phi.chosen.iter().map(|s| self.colours.decode_set(*s))),
        }
    }
}

impl ColouringFile {
    pub fn new(source: GraphSource, phi: &FoldColouring) -> Self {
        ColouringFile { graph: source, b: phi.fold, chosen: keyed(phi.chosen.iter().map(|s| s.iter().map(|c| c.0).collect())) }
    }
}

fn keyed(lists: impl Iterator<Item = Vec<u32>>) -> BTreeMap<String, Vec<u32>> {
    lists.enumerate().map(|(v, l)| (v.to_string(), l)).collect()
}

/// `{"m": 1, "lists": [[1,2,3,4], ...]}`, lists in path order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathFile {
    pub m: usize,
    pub lists: Vec<Vec<u32>>,
}

impl PathFile {
    pub fn load(&self) -> Result<(PathInstance, ColourMap), ModelError> {
        let ids: BTreeSet<u32> = self.lists.iter().flatten().copied().collect();
        let colours = if ids.last().is_some_and(|&max| max >= ColourSet::CAPACITY) {
            ColourMap::compacting(&ids)?
        } else {
            ColourMap::identity()
        };
        let lists = self.lists.iter().map(|l| colours.encode_set(l)).collect::<Result<Vec<_>, _>>()?;
        Ok((PathInstance::new(self.m, lists), colours))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_round_trip() {
        let text = r#"{"graph":{"theta":[2,4,4]},"a":4,"lists":{"0":[1,2,3,4],"1":[1,2,3,4],"2":[1,2,3,4],"3":[1,2,3,4],"4":[1,2,3,4],"5":[1,2,3,4],"6":[1,2,3,4],"7":[1,2,3,4],"8":[5,6,7,8]}}"#;
        let file: InstanceFile = serde_json::from_str(text).unwrap();
        let inst = file.load().unwrap();
        assert_eq!(inst.graph.vertex_count(), 9);
        assert!(inst.colours.is_identity());
        assert_eq!(inst.lists[8], ColourSet::from_ids([5, 6, 7, 8]));
        assert_eq!(serde_json::to_string(&inst.to_file()).unwrap(), text);
    }

    #[test]
    fn explicit_adjacency() {
        let text = r#"{"graph":{"adjacency":[[1,2],[0,2],[0,1]]},"lists":{"0":[1,2],"1":[1,2],"2":[1,3]}}"#;
        let inst = serde_json::from_str::<InstanceFile>(text).unwrap().load().unwrap();
        assert_eq!(inst.graph.edge_count(), 3);
        assert_eq!(inst.lists.declared_width(), None);
    }

    #[test]
    fn large_ids_are_compacted_and_restored() {
        let text = r#"{"graph":{"evenCycle":4},"a":2,"lists":{"0":[1000,7],"1":[7,500],"2":[1000,500],"3":[7,1000]}}"#;
        let inst = serde_json::from_str::<InstanceFile>(text).unwrap().load().unwrap();
        assert!(!inst.colours.is_identity());
        assert_eq!(inst.lists[0], ColourSet::from_ids([0, 2]));
        assert_eq!(inst.to_file().lists["1"], vec![7, 500]);
        let phi = FoldColouring::new(vec![ColourSet::from_ids([2]); 4], 1);
        assert_eq!(inst.colouring_file(&phi).chosen["3"], vec![1000]);
    }

    #[test]
    fn malformed_instances() {
        let missing = r#"{"graph":{"evenCycle":4},"lists":{"0":[1],"1":[1],"2":[1]}}"#;
        assert!(serde_json::from_str::<InstanceFile>(missing).unwrap().load().is_err());
        let width = r#"{"graph":{"evenCycle":4},"a":2,"lists":{"0":[1],"1":[1,2],"2":[1,2],"3":[1,2]}}"#;
        assert!(matches!(
            serde_json::from_str::<InstanceFile>(width).unwrap().load(),
            Err(LoadError::Model(ModelError::WidthViolation(_)))
        ));
        let dup = r#"{"graph":{"evenCycle":4},"lists":{"0":[1,1],"1":[1],"2":[1],"3":[1]}}"#;
        assert!(serde_json::from_str::<InstanceFile>(dup).unwrap().load().is_err());
        let bad_graph = r#"{"graph":{"adjacency":[[1],[]]},"lists":{"0":[1],"1":[1]}}"#;
        assert!(serde_json::from_str::<InstanceFile>(bad_graph).is_err());
    }

    #[test]
    fn path_file() {
        let file: PathFile = serde_json::from_str(r#"{"m":1,"lists":[[1,2,3,4],[3,4,5,6],[5,6,7,8]]}"#).unwrap();
        let (p, map) = file.load().unwrap();
        assert!(map.is_identity());
        assert_eq!(p.len(), 3);
        assert_eq!(p.lists[1], ColourSet::from_ids([3, 4, 5, 6]));
    }
}
