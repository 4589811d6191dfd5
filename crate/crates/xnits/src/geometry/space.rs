use std::collections::HashMap;

use super::{tri_signed_area, Mesh, Point};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElemKind {
    Seg2,
    Seg3,
    Tri3,
    Tri6,
}

impl ElemKind {
    pub fn n_nodes(self) -> usize {
        match self {
            ElemKind::Seg2 => 2,
            ElemKind::Seg3 => 3,
            ElemKind::Tri3 => 3,
            ElemKind::Tri6 => 6,
        }
    }
    /// Polynomial degree of the shape functions.
    pub fn order(self) -> usize {
        match self {
            ElemKind::Seg2 | ElemKind::Tri3 => 1,
            ElemKind::Seg3 | ElemKind::Tri6 => 2,
        }
    }
}

/// Scalar finite-element space of order 1 or 2 on a simplex mesh.
///
/// Order-2 spaces add midside nodes on top of the mesh nodes; the geometry
/// (element shape, cut decomposition) stays straight-edged.
#[derive(Debug, Clone)]
pub struct Space {
    pub order: usize,
    pub kind: ElemKind,
    /// Mesh nodes first, then the added midside nodes.
    pub node_coords: Vec<Point>,
    /// Space node ids per element.
    pub element_nodes: Vec<Vec<usize>>,
    pub n_mesh_nodes: usize,
    /// For order 2 in 2D: (sorted mesh edge) -> midside node id.
    edge_mid: HashMap<(usize, usize), usize>,
}

impl Space {
    pub fn new(mesh: &Mesh, order: usize) -> Result<Self> {
        if order != 1 && order != 2 {
            return Err(Error::Geometry(format!(
                "unsupported element order {order}"
            )));
        }
        let seg = mesh.dimension == 1;
        let kind = match (seg, order) {
            (true, 1) => ElemKind::Seg2,
            (true, _) => ElemKind::Seg3,
            (false, 1) => ElemKind::Tri3,
            (false, _) => ElemKind::Tri6,
        };
        let mut node_coords = mesh.node_coords.clone();
        let mut element_nodes: Vec<Vec<usize>> = mesh.elements.clone();
        let mut edge_mid = HashMap::new();
        if order == 2 {
            if seg {
                for el in element_nodes.iter_mut() {
                    let (a, b) = (el[0], el[1]);
                    let mid = midpoint(mesh.node_coords[a], mesh.node_coords[b]);
                    let id = node_coords.len();
                    node_coords.push(mid);
                    edge_mid.insert(key(a, b), id);
                    el.push(id);
                }
            } else {
                for el in element_nodes.iter_mut() {
                    let corners = [el[0], el[1], el[2]];
                    for (i, j) in [(0, 1), (1, 2), (2, 0)] {
                        let k = key(corners[i], corners[j]);
                        let id = *edge_mid.entry(k).or_insert_with(|| {
                            node_coords.push(midpoint(
                                mesh.node_coords[corners[i]],
                                mesh.node_coords[corners[j]],
                            ));
                            node_coords.len() - 1
                        });
                        el.push(id);
                    }
                }
            }
        }
        Ok(Space {
            order,
            kind,
            node_coords,
            element_nodes,
            n_mesh_nodes: mesh.node_coords.len(),
            edge_mid,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.node_coords.len()
    }

    pub fn basis(&self, element: usize) -> ElementBasis {
        let nodes = self.element_nodes[element].clone();
        let coords = nodes.iter().map(|&n| self.node_coords[n]).collect();
        ElementBasis {
            kind: self.kind,
            nodes,
            coords,
        }
    }

    /// Space nodes on the boundary facets carrying `tag`, midside included.
    pub fn tagged_nodes(&self, mesh: &Mesh, tag: &str) -> Vec<usize> {
        let mut out = Vec::new();
        for (nodes, t) in &mesh.boundary_facets {
            if t != tag {
                continue;
            }
            out.extend_from_slice(nodes);
            if self.order == 2 && nodes.len() == 2 {
                if let Some(&m) = self.edge_mid.get(&key(nodes[0], nodes[1])) {
                    out.push(m);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Space node ids along a tagged boundary edge: [end0, end1] or
    /// [end0, end1, mid].
    pub fn edge_nodes(&self, facet_nodes: &[usize]) -> Vec<usize> {
        let mut out = facet_nodes.to_vec();
        if self.order == 2 && facet_nodes.len() == 2 {
            if let Some(&m) = self.edge_mid.get(&key(facet_nodes[0], facet_nodes[1])) {
                out.push(m);
            }
        }
        out
    }
}

fn key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn midpoint(a: Point, b: Point) -> Point {
    [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
}

/// Shape-function evaluation on one element at physical points.
#[derive(Debug, Clone)]
pub struct ElementBasis {
    pub kind: ElemKind,
    pub nodes: Vec<usize>,
    pub coords: Vec<Point>,
}

impl ElementBasis {
    pub fn n_nodes(&self) -> usize {
        self.kind.n_nodes()
    }

    /// Shape-function values at a physical point.
    pub fn values(&self, p: Point) -> Vec<f64> {
        match self.kind {
            ElemKind::Seg2 => {
                let t = self.seg_param(p);
                vec![1.0 - t, t]
            }
            ElemKind::Seg3 => {
                let t = self.seg_param(p);
                vec![
                    (1.0 - t) * (1.0 - 2.0 * t),
                    t * (2.0 * t - 1.0),
                    4.0 * t * (1.0 - t),
                ]
            }
            ElemKind::Tri3 => {
                let l = self.barycentric(p);
                l.to_vec()
            }
            ElemKind::Tri6 => {
                let l = self.barycentric(p);
                vec![
                    l[0] * (2.0 * l[0] - 1.0),
                    l[1] * (2.0 * l[1] - 1.0),
                    l[2] * (2.0 * l[2] - 1.0),
                    4.0 * l[0] * l[1],
                    4.0 * l[1] * l[2],
                    4.0 * l[2] * l[0],
                ]
            }
        }
    }

    /// Physical gradients of the shape functions at `p`.
    pub fn gradients(&self, p: Point) -> Vec<Point> {
        match self.kind {
            ElemKind::Seg2 => {
                let len = self.coords[1][0] - self.coords[0][0];
                vec![[-1.0 / len, 0.0], [1.0 / len, 0.0]]
            }
            ElemKind::Seg3 => {
                let len = self.coords[1][0] - self.coords[0][0];
                let t = self.seg_param(p);
                vec![
                    [(4.0 * t - 3.0) / len, 0.0],
                    [(4.0 * t - 1.0) / len, 0.0],
                    [(4.0 - 8.0 * t) / len, 0.0],
                ]
            }
            ElemKind::Tri3 => self.bary_gradients().to_vec(),
            ElemKind::Tri6 => {
                let l = self.barycentric(p);
                let g = self.bary_gradients();
                let mut out = Vec::with_capacity(6);
                for i in 0..3 {
                    out.push([(4.0 * l[i] - 1.0) * g[i][0], (4.0 * l[i] - 1.0) * g[i][1]]);
                }
                for (i, j) in [(0usize, 1usize), (1, 2), (2, 0)] {
                    out.push([
                        4.0 * (l[i] * g[j][0] + l[j] * g[i][0]),
                        4.0 * (l[i] * g[j][1] + l[j] * g[i][1]),
                    ]);
                }
                out
            }
        }
    }

    fn seg_param(&self, p: Point) -> f64 {
        (p[0] - self.coords[0][0]) / (self.coords[1][0] - self.coords[0][0])
    }

    fn barycentric(&self, p: Point) -> [f64; 3] {
        let (a, b, c) = (self.coords[0], self.coords[1], self.coords[2]);
        let area = tri_signed_area(a, b, c);
        [
            tri_signed_area(p, b, c) / area,
            tri_signed_area(a, p, c) / area,
            tri_signed_area(a, b, p) / area,
        ]
    }

    fn bary_gradients(&self) -> [Point; 3] {
        let (a, b, c) = (self.coords[0], self.coords[1], self.coords[2]);
        let twice_area = 2.0 * tri_signed_area(a, b, c);
        [
            [(b[1] - c[1]) / twice_area, (c[0] - b[0]) / twice_area],
            [(c[1] - a[1]) / twice_area, (a[0] - c[0]) / twice_area],
            [(a[1] - b[1]) / twice_area, (b[0] - a[0]) / twice_area],
        ]
    }
}

/// 1D shape values along a boundary edge parameterized by t in [0, 1];
/// node order [end0, end1] or [end0, end1, mid].
pub(crate) fn edge_shape(order: usize, t: f64) -> Vec<f64> {
    if order == 1 {
        vec![1.0 - t, t]
    } else {
        vec![
            (1.0 - t) * (1.0 - 2.0 * t),
            t * (2.0 * t - 1.0),
            4.0 * t * (1.0 - t),
        ]
    }
}
