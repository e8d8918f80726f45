use std::io::{Read, Write};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{FiniteMetricSpace, MetricError};
use crate::groups::{EnumeratedGroup, FinGenGroup};

#[derive(Debug, Serialize, Deserialize)]
struct EdgeRecord {
    u: usize,
    v: usize,
}

/// Writes the undirected edges of a graph metric as `u,v` rows.
pub fn write_edges_csv<W: Write>(space: &FiniteMetricSpace, out: W) -> Result<(), MetricError> {
    let mut w = csv::Writer::from_writer(out);
    for (u, v) in space.edges() {
        w.serialize(EdgeRecord { u, v })?;
    }
    w.flush().map_err(|e| MetricError::Io(e.to_string()))?;
    Ok(())
}

/// Reads a `u,v` edge list; the point count is one more than the largest
/// endpoint unless given.
pub fn read_edges_csv<R: Read>(input: R, len: Option<usize>) -> Result<FiniteMetricSpace, MetricError> {
    let mut r = csv::Reader::from_reader(input);
    let edges: Vec<(usize, usize)> = r
        .deserialize::<EdgeRecord>()
        .map(|rec| rec.map(|e| (e.u, e.v)))
        .collect::<Result<_, _>>()?;
    let n = len.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0));
    FiniteMetricSpace::from_edges(n, &edges)
}

/// Writes the full distance matrix, one row per point, as reduced
/// fractions (`p/q`, or `p` for integers).
pub fn write_distance_csv<W: Write>(space: &FiniteMetricSpace, out: W) -> Result<(), MetricError> {
    let mut w = csv::Writer::from_writer(out);
    for x in 0..space.len() {
        w.write_record(space.row(x).iter().map(|d| d.to_string()))?;
    }
    w.flush().map_err(|e| MetricError::Io(e.to_string()))?;
    Ok(())
}

/// One component of a box-space descriptor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ComponentSpec {
    Path {
        points: usize,
    },
    Cycle {
        points: usize,
    },
    Edges {
        points: usize,
        edges: Vec<(usize, usize)>,
    },
    /// Cayley graph of a finite group given by its generators.
    Cayley {
        group: FinGenGroup,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxComponent {
    pub index: u64,
    pub component: ComponentSpec,
}

/// JSON description of a box space: components with their indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxSpaceDescriptor {
    pub components: Vec<BoxComponent>,
}

impl ComponentSpec {
    pub fn build(&self, order_cap: usize) -> Result<FiniteMetricSpace, MetricError> {
        Ok(match self {
            Self::Path { points } => FiniteMetricSpace::path(*points),
            Self::Cycle { points } => FiniteMetricSpace::cycle(*points),
            Self::Edges { points, edges } => FiniteMetricSpace::from_edges(*points, edges)?,
            Self::Cayley { group } => FiniteMetricSpace::cayley_graph(&EnumeratedGroup::enumerate(group.clone(), order_cap)?)?,
        })
    }
}

impl BoxSpaceDescriptor {
    pub fn build(&self, order_cap: usize) -> Result<FiniteMetricSpace, MetricError> {
        let parts = self
            .components
            .iter()
            .map(|c| c.component.build(order_cap).map(Arc::new))
            .collect::<Result<Vec<_>, _>>()?;
        let indices = self.components.iter().map(|c| c.index).collect();
        FiniteMetricSpace::box_space_indexed(parts, indices)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    #[test]
    fn edge_csv_round_trip() {
        let c = FiniteMetricSpace::cycle(5);
        let mut buf = Vec::new();
        write_edges_csv(&c, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("u,v\n0,1\n"));
        let back = read_edges_csv(buf.as_slice(), None).unwrap();
        assert_eq!(back.len(), 5);
        assert_eq!(back.edges(), c.edges());
    }

    #[test]
    fn distance_csv_rows() {
        let p = FiniteMetricSpace::path(3);
        let mut buf = Vec::new();
        write_distance_csv(&p, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "0,1,2\n1,0,1\n2,1,0\n");
    }

    #[test]
    fn descriptor_builds_box_space() {
        let json = r#"{"components":[
            {"index":0,"component":{"shape":"cycle","points":4}},
            {"index":1,"component":{"shape":"cayley","group":{"kind":"cyclic","modulus":6,"rank":1,"generators":[{"vector":[1]}]}}}
        ]}"#;
        let d: BoxSpaceDescriptor = serde_json::from_str(json).unwrap();
        let b = d.build(100).unwrap();
        assert_eq!(b.len(), 10);
        assert_eq!(b.dist(0, 4), Rational64::from_integer(7));
    }

    #[test]
    fn descriptor_rejects_unknown_fields() {
        let json = r#"{"components":[],"extra":1}"#;
        assert!(serde_json::from_str::<BoxSpaceDescriptor>(json).is_err());
    }
}
