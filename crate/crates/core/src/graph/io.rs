//! Text (`n;u-v,...`) and JSON (`{"n":..,"edges":[[u,v],..]}`) graph forms.

use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Graph;
use crate::{Error, Result};

/// Wire form of a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            n: g.n(),
            edges: g.edges().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Self> {
        let edges: Vec<(usize, usize)> = j.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::from_edges(j.n, &edges)
    }
}

impl Serialize for Graph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = GraphJson::deserialize(d)?;
        Graph::try_from(j).map_err(serde::de::Error::custom)
    }
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (n, rest) = s
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("missing ';' in graph text {s:?}")))?;
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad vertex count {n:?}")))?;
        let mut edges = Vec::new();
        for tok in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (u, v) = tok
                .split_once('-')
                .ok_or_else(|| Error::Parse(format!("bad edge {tok:?}")))?;
            let u: usize = u
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad edge {tok:?}")))?;
            let v: usize = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad edge {tok:?}")))?;
            edges.push((u, v));
        }
        Graph::from_edges(n, &edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let g: Graph = "5;0-1,1-2,3-4".parse().unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.to_string().parse::<Graph>().unwrap(), g);
        assert_eq!("3;".parse::<Graph>().unwrap(), Graph::empty(3).unwrap());
    }

    #[test]
    fn text_rejects_bad_input() {
        assert!("3;0-0".parse::<Graph>().is_err());
        assert!("3;0-1,1-0".parse::<Graph>().is_err());
        assert!("3 0-1".parse::<Graph>().is_err());
        assert!("3;0-x".parse::<Graph>().is_err());
    }

    #[test]
    fn json_form() {
        let g = Graph::path(3).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"n":3,"edges":[[0,1],[1,2]]}"#);
        assert_eq!(serde_json::from_str::<Graph>(&s).unwrap(), g);
        assert!(serde_json::from_str::<Graph>(r#"{"n":2,"edges":[[0,1],[0,1]]}"#).is_err());
        assert!(serde_json::from_str::<Graph>(r#"{"n":2,"edges":[[1,1]]}"#).is_err());
    }
}
