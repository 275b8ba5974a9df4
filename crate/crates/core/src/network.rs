//! Construction and verification of the eight-mode cluster-generation
//! unitary: the closed-form matrix, its 24-element beam-splitter
//! decomposition, the graph adjacency, and the cluster-state conditions.
//!
//! Mode labels in [`NetworkSpec`] are one-based, matching the optical
//! network drawing; quadrature-space objects are zero-based.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::gaussian::SymplecticTransform;

/// Tolerance for unitarity and cluster-condition residuals.
pub const NETWORK_TOL: f64 = 1e-10;

/// A complex linear map on mode operators, C_k = sum_l U_kl a_l.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexModeMap {
    n: usize,
    entries: DMatrix<Complex64>,
}

impl ComplexModeMap {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self, CoreError> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(CoreError::DimensionMismatch {
                expected: entries.ncols(),
                got: entries.nrows(),
            });
        }
        Ok(Self {
            n: entries.nrows(),
            entries,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            entries: DMatrix::identity(n, n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn re(&self) -> DMatrix<f64> {
        self.entries.map(|z| z.re)
    }

    pub fn im(&self) -> DMatrix<f64> {
        self.entries.map(|z| z.im)
    }

    /// Max-norm residual of U^dagger U - I.
    pub fn unitarity_residual(&self) -> f64 {
        let prod = self.entries.adjoint() * &self.entries;
        let eye = DMatrix::<Complex64>::identity(self.n, self.n);
        (prod - eye).iter().fold(0.0f64, |a, z| a.max(z.norm()))
    }

    /// Entrywise max-norm distance to another map.
    pub fn max_distance(&self, other: &Self) -> f64 {
        (&self.entries - &other.entries)
            .iter()
            .fold(0.0f64, |a, z| a.max(z.norm()))
    }

    /// Quadrature-space embedding [[Re U, -Im U], [Im U, Re U]] in xxpp
    /// ordering. Rejects non-unitary maps.
    pub fn to_symplectic(&self) -> Result<SymplecticTransform, CoreError> {
        let res = self.unitarity_residual();
        if res > NETWORK_TOL {
            return Err(CoreError::NotUnitary(res));
        }
        let n = self.n;
        let re = self.re();
        let im = self.im();
        let mut s = DMatrix::zeros(2 * n, 2 * n);
        s.view_mut((0, 0), (n, n)).copy_from(&re);
        s.view_mut((0, n), (n, n)).copy_from(&(-&im));
        s.view_mut((n, 0), (n, n)).copy_from(&im);
        s.view_mut((n, n), (n, n)).copy_from(&re);
        SymplecticTransform::new(s, "network")
    }
}

/// Symmetric 0/1 adjacency matrix of a simple graph.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyMatrix {
    n: usize,
    entries: DMatrix<f64>,
}

impl AdjacencyMatrix {
    /// Build from one-based undirected edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, CoreError> {
        let mut entries = DMatrix::zeros(n, n);
        for &(a, b) in edges {
            if a == 0 || a > n || b == 0 || b > n {
                return Err(CoreError::ModeOutOfRange {
                    mode: a.max(b),
                    n_modes: n,
                });
            }
            if a == b {
                return Err(CoreError::param("edges", "self-loops are not allowed"));
            }
            entries[(a - 1, b - 1)] = 1.0;
            entries[(b - 1, a - 1)] = 1.0;
        }
        Ok(Self { n, entries })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            entries: DMatrix::zeros(n, n),
        }
    }

    pub fn complete(n: usize) -> Self {
        let entries = DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { 1.0 });
        Self { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// Zero-based neighbor list of a zero-based vertex.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&j| self.entries[(v, j)] != 0.0).collect()
    }
}

/// Diagnostics from checking a unitary against a graph.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ClusterReport {
    /// max |Im U - A Re U|
    pub max_residual_imrel: f64,
    /// max |Re U (Re U)^T - (I + A^2)^{-1}|
    pub max_residual_gram: f64,
    /// max |U^dagger U - I|
    pub unitarity_residual: f64,
}

impl ClusterReport {
    pub fn all_below(&self, tol: f64) -> bool {
        self.max_residual_imrel < tol
            && self.max_residual_gram < tol
            && self.unitarity_residual < tol
    }
}

/// Check the cluster conditions Im U = A Re U and
/// Re U (Re U)^T = (I + A^2)^{-1} along with unitarity.
pub fn verify_cluster_condition(
    u: &ComplexModeMap,
    a: &AdjacencyMatrix,
) -> Result<ClusterReport, CoreError> {
    if u.n() != a.n() {
        return Err(CoreError::DimensionMismatch {
            expected: u.n(),
            got: a.n(),
        });
    }
    let re = u.re();
    let im = u.im();
    let max_residual_imrel = (&im - a.entries() * &re)
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    let eye = DMatrix::<f64>::identity(u.n(), u.n());
    let target = (&eye + a.entries() * a.entries())
        .try_inverse()
        .ok_or_else(|| CoreError::param("adjacency", "I + A^2 is singular"))?;
    let max_residual_gram = (&re * re.transpose() - target)
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    Ok(ClusterReport {
        max_residual_imrel,
        max_residual_gram,
        unitarity_residual: u.unitarity_residual(),
    })
}

/// The adjacency of the eight-mode cluster graph: modes 1..6 each connect
/// to modes 7 and 8.
pub fn reference_adjacency() -> AdjacencyMatrix {
    let mut edges = Vec::new();
    for i in 1..=6 {
        edges.push((i, 7));
        edges.push((i, 8));
    }
    AdjacencyMatrix::from_edges(8, &edges).expect("static edge list is valid")
}

/// The closed-form eight-mode cluster-generation unitary, entries evaluated
/// as radicals in double precision.
pub fn reference_unitary() -> ComplexModeMap {
    let re = |v: f64| Complex64::new(v, 0.0);
    let im = |v: f64| Complex64::new(0.0, v);
    let z = Complex64::new(0.0, 0.0);
    let s = |v: f64| v.sqrt();

    let rows: [[Complex64; 8]; 8] = [
        [
            re(s(3.0 / 5.0)),
            re(2.0 / s(35.0)),
            re(2.0 / (3.0 * s(7.0))),
            im(-1.0 / s(91.0)),
            re(2.0 / (3.0 * s(11.0))),
            im(1.0 / s(7.0)),
            re(2.0 / s(143.0)),
            z,
        ],
        [
            z,
            re(-5.0 / s(35.0)),
            re(2.0 / (3.0 * s(7.0))),
            im(-1.0 / s(91.0)),
            re(2.0 / (3.0 * s(11.0))),
            im(1.0 / s(7.0)),
            re(2.0 / s(143.0)),
            z,
        ],
        [
            z,
            z,
            re(-s(7.0) / 3.0),
            im(-1.0 / s(91.0)),
            re(2.0 / (3.0 * s(11.0))),
            im(1.0 / s(7.0)),
            re(2.0 / s(143.0)),
            z,
        ],
        [
            z,
            z,
            z,
            im(-1.0 / s(91.0)),
            z,
            im(1.0 / s(7.0)),
            re(-11.0 / s(143.0)),
            z,
        ],
        [
            z,
            z,
            z,
            im(-1.0 / s(91.0)),
            re(-3.0 / s(11.0)),
            im(1.0 / s(7.0)),
            re(2.0 / s(143.0)),
            z,
        ],
        [
            re(-2.0 / s(15.0)),
            re(2.0 / s(35.0)),
            re(2.0 / (3.0 * s(7.0))),
            im(-1.0 / s(91.0)),
            re(2.0 / (3.0 * s(11.0))),
            im(1.0 / s(7.0)),
            re(2.0 / s(143.0)),
            re(1.0 / s(3.0)),
        ],
        [
            im(1.0 / s(15.0)),
            im(-1.0 / s(35.0)),
            im(-1.0 / (3.0 * s(7.0))),
            re(-7.0 / s(91.0)),
            im(-1.0 / (3.0 * s(11.0))),
            z,
            im(-1.0 / s(143.0)),
            im(1.0 / s(3.0)),
        ],
        [
            im(1.0 / s(15.0)),
            im(-1.0 / s(35.0)),
            im(-1.0 / (3.0 * s(7.0))),
            re(6.0 / s(91.0)),
            im(-1.0 / (3.0 * s(11.0))),
            re(1.0 / s(7.0)),
            im(-1.0 / s(143.0)),
            im(1.0 / s(3.0)),
        ],
    ];
    let entries = DMatrix::from_fn(8, 8, |i, j| rows[i][j]);
    ComplexModeMap::new(entries).expect("8x8 matrix")
}

/// Beam-splitter sign variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BsSign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

/// One linear-optics element, with one-based mode labels.
#[derive(Debug, Clone, PartialEq)]
pub enum NetworkElement {
    Fourier { mode: usize },
    RotPi { mode: usize },
    BeamSplitter { k: usize, l: usize, t: f64, sign: BsSign },
}

impl NetworkElement {
    fn validate(&self, n: usize) -> Result<(), CoreError> {
        let check = |m: usize| {
            if m == 0 || m > n {
                Err(CoreError::ModeOutOfRange { mode: m, n_modes: n })
            } else {
                Ok(())
            }
        };
        match *self {
            NetworkElement::Fourier { mode } | NetworkElement::RotPi { mode } => check(mode),
            NetworkElement::BeamSplitter { k, l, t, .. } => {
                check(k)?;
                check(l)?;
                if k == l {
                    return Err(CoreError::param("modes", "beam splitter needs k != l"));
                }
                if !(t > 0.0 && t <= 1.0) {
                    return Err(CoreError::InvalidTransmittance(t));
                }
                Ok(())
            }
        }
    }

    /// The element's complex mode map on n modes.
    pub fn mode_map(&self, n: usize) -> Result<ComplexModeMap, CoreError> {
        self.validate(n)?;
        let mut m = DMatrix::<Complex64>::identity(n, n);
        match *self {
            NetworkElement::Fourier { mode } => {
                m[(mode - 1, mode - 1)] = Complex64::new(0.0, 1.0);
            }
            NetworkElement::RotPi { mode } => {
                m[(mode - 1, mode - 1)] = Complex64::new(-1.0, 0.0);
            }
            NetworkElement::BeamSplitter { k, l, t, sign } => {
                let (k, l) = (k - 1, l - 1);
                let s = match sign {
                    BsSign::Plus => 1.0,
                    BsSign::Minus => -1.0,
                };
                m[(k, k)] = Complex64::new(t.sqrt(), 0.0);
                m[(k, l)] = Complex64::new((1.0 - t).sqrt(), 0.0);
                m[(l, k)] = Complex64::new(s * (1.0 - t).sqrt(), 0.0);
                m[(l, l)] = Complex64::new(-s * t.sqrt(), 0.0);
            }
        }
        ComplexModeMap::new(m)
    }
}

// Wire format for a network element: {kind, modes, t?, sign?}.
#[derive(Serialize, Deserialize)]
struct ElementRecord {
    kind: String,
    modes: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sign: Option<BsSign>,
}

impl Serialize for NetworkElement {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let rec = match *self {
            NetworkElement::Fourier { mode } => ElementRecord {
                kind: "fourier".into(),
                modes: vec![mode],
                t: None,
                sign: None,
            },
            NetworkElement::RotPi { mode } => ElementRecord {
                kind: "rot_pi".into(),
                modes: vec![mode],
                t: None,
                sign: None,
            },
            NetworkElement::BeamSplitter { k, l, t, sign } => ElementRecord {
                kind: "bs".into(),
                modes: vec![k, l],
                t: Some(t),
                sign: Some(sign),
            },
        };
        rec.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for NetworkElement {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let rec = ElementRecord::deserialize(de)?;
        match rec.kind.as_str() {
            "fourier" | "rot_pi" => {
                if rec.modes.len() != 1 {
                    return Err(D::Error::custom("single-mode element needs one mode"));
                }
                let mode = rec.modes[0];
                Ok(if rec.kind == "fourier" {
                    NetworkElement::Fourier { mode }
                } else {
                    NetworkElement::RotPi { mode }
                })
            }
            "bs" => {
                if rec.modes.len() != 2 {
                    return Err(D::Error::custom("beam splitter needs two modes"));
                }
                Ok(NetworkElement::BeamSplitter {
                    k: rec.modes[0],
                    l: rec.modes[1],
                    t: rec.t.ok_or_else(|| D::Error::custom("bs needs t"))?,
                    sign: rec.sign.ok_or_else(|| D::Error::custom("bs needs sign"))?,
                })
            }
            other => Err(D::Error::custom(format!("unknown element kind {other:?}"))),
        }
    }
}

/// An ordered linear-optics network on n modes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub n: usize,
    pub elements: Vec<NetworkElement>,
}

impl NetworkSpec {
    pub fn new(n: usize, elements: Vec<NetworkElement>) -> Result<Self, CoreError> {
        for e in &elements {
            e.validate(n)?;
        }
        Ok(Self { n, elements })
    }
}

/// The 24-element decomposition of the cluster-generation unitary.
///
/// The matrix is the ordered product of the element maps taken left to
/// right exactly as listed, with the Fourier element equal to i on its
/// mode. This convention reproduces the closed-form matrix to 1e-10.
pub fn reference_network_spec() -> NetworkSpec {
    use NetworkElement::{BeamSplitter as Bs, Fourier as F, RotPi as R};
    let t = [
        1.0 / 78.0,
        6.0 / 7.0,
        54.0 / 55.0,
        5.0 / 6.0,
        35.0 / 36.0,
        4.0 / 5.0,
        20.0 / 21.0,
        3.0 / 4.0,
        9.0 / 10.0,
        2.0 / 3.0,
        2.0 / 3.0,
        1.0 / 2.0,
    ];
    let bs = |k: usize, l: usize, idx: usize, sign: BsSign| Bs {
        k,
        l,
        t: t[idx - 1],
        sign,
    };
    let elements = vec![
        R { mode: 2 },
        F { mode: 3 },
        F { mode: 4 },
        F { mode: 5 },
        R { mode: 6 },
        F { mode: 7 },
        F { mode: 8 },
        bs(6, 8, 12, BsSign::Plus),
        bs(7, 8, 11, BsSign::Plus),
        bs(1, 6, 10, BsSign::Plus),
        bs(1, 7, 9, BsSign::Plus),
        bs(2, 6, 8, BsSign::Plus),
        F { mode: 6 },
        bs(2, 7, 7, BsSign::Plus),
        bs(3, 6, 6, BsSign::Plus),
        F { mode: 3 },
        bs(3, 7, 5, BsSign::Minus),
        bs(5, 6, 4, BsSign::Minus),
        F { mode: 5 },
        bs(5, 7, 3, BsSign::Minus),
        bs(4, 6, 2, BsSign::Minus),
        F { mode: 4 },
        bs(4, 7, 1, BsSign::Plus),
        F { mode: 4 },
    ];
    NetworkSpec::new(8, elements).expect("static element list is valid")
}

/// Ordered product of the elements' complex mode maps, left to right.
pub fn compose_network(spec: &NetworkSpec) -> Result<ComplexModeMap, CoreError> {
    let mut product = DMatrix::<Complex64>::identity(spec.n, spec.n);
    for e in &spec.elements {
        product *= e.mode_map(spec.n)?.entries().clone();
    }
    ComplexModeMap::new(product)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn reference_unitary_entries() {
        let u = reference_unitary();
        let m = u.entries();
        assert_abs_diff_eq!(m[(0, 0)].re, (3.0f64 / 5.0).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(m[(0, 0)].re, 0.774597, epsilon = 1e-6);
        assert_eq!(m[(3, 7)], num_complex::Complex64::new(0.0, 0.0));
        assert_abs_diff_eq!(m[(6, 3)].re, -7.0 / 91.0f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(m[(6, 3)].im, 0.0);
    }

    #[test]
    fn reference_adjacency_structure() {
        let a = reference_adjacency();
        let row7: Vec<f64> = (0..8).map(|j| a.entries()[(6, j)]).collect();
        assert_eq!(row7, vec![1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0]);
        for i in 0..8 {
            assert_eq!(a.entries()[(i, i)], 0.0);
        }
        assert_eq!(a.entries(), &a.entries().transpose());
    }

    #[test]
    fn cluster_condition_holds_for_reference_graph() {
        let report = verify_cluster_condition(&reference_unitary(), &reference_adjacency()).unwrap();
        assert!(report.max_residual_imrel < 1e-10, "{report:?}");
        assert!(report.max_residual_gram < 1e-10, "{report:?}");
        assert!(report.unitarity_residual < 1e-10, "{report:?}");
    }

    #[test]
    fn cluster_condition_identity_and_negative_control() {
        let id = ComplexModeMap::identity(8);
        let report = verify_cluster_condition(&id, &AdjacencyMatrix::empty(8)).unwrap();
        assert_eq!(report.max_residual_imrel, 0.0);
        assert_eq!(report.max_residual_gram, 0.0);
        assert_eq!(report.unitarity_residual, 0.0);

        let bad = verify_cluster_condition(&reference_unitary(), &AdjacencyMatrix::complete(8)).unwrap();
        assert!(bad.max_residual_imrel > 0.1);
    }

    #[test]
    fn empty_spec_composes_to_identity() {
        let spec = NetworkSpec::new(3, vec![]).unwrap();
        let u = compose_network(&spec).unwrap();
        assert_eq!(u, ComplexModeMap::identity(3));
    }

    #[test]
    fn single_fourier_is_i() {
        let spec = NetworkSpec::new(1, vec![NetworkElement::Fourier { mode: 1 }]).unwrap();
        let u = compose_network(&spec).unwrap();
        assert_eq!(u.entries()[(0, 0)], num_complex::Complex64::new(0.0, 1.0));
    }

    #[test]
    fn decomposition_reproduces_reference_unitary() {
        let spec = reference_network_spec();
        assert_eq!(spec.elements.len(), 24);
        let u = compose_network(&spec).unwrap();
        assert!(u.max_distance(&reference_unitary()) < 1e-10);
    }

    #[test]
    fn reference_unitary_embeds_symplectically() {
        let s = reference_unitary().to_symplectic().unwrap();
        assert!(s.symplectic_residual() < 1e-10);
    }

    #[test]
    fn diag_i_swaps_quadratures() {
        let spec = NetworkSpec::new(2, vec![NetworkElement::Fourier { mode: 1 }]).unwrap();
        let s = compose_network(&spec).unwrap().to_symplectic().unwrap();
        // on mode 0: x' = -p, p' = x
        assert_eq!(s.matrix()[(0, 2)], -1.0);
        assert_eq!(s.matrix()[(2, 0)], 1.0);
        assert_eq!(s.matrix()[(1, 1)], 1.0);
    }

    #[test]
    fn to_symplectic_rejects_non_unitary() {
        let m = DMatrix::from_element(2, 2, num_complex::Complex64::new(1.0, 0.0));
        let u = ComplexModeMap::new(m).unwrap();
        assert!(u.to_symplectic().is_err());
    }

    #[test]
    fn spec_round_trips_through_json() {
        let spec = reference_network_spec();
        let json = serde_json::to_string(&spec).unwrap();
        let back: NetworkSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(spec, back);
    }

    #[test]
    fn spec_rejects_bad_elements() {
        assert!(NetworkSpec::new(
            2,
            vec![NetworkElement::BeamSplitter {
                k: 1,
                l: 1,
                t: 0.5,
                sign: BsSign::Plus
            }]
        )
        .is_err());
        assert!(NetworkSpec::new(
            2,
            vec![NetworkElement::BeamSplitter {
                k: 1,
                l: 2,
                t: 0.0,
                sign: BsSign::Plus
            }]
        )
        .is_err());
        assert!(NetworkSpec::new(2, vec![NetworkElement::Fourier { mode: 3 }]).is_err());
    }
}
