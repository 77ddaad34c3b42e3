//! Framed distributions, derived flags, Cauchy characteristics and
//! reduction by coordinate-aligned subbundles.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::chart::{ChartRef, VectorField};
use crate::error::{Error, Result};
use crate::linalg::{canonical_frame, frame_echelon, Echelon, PivotOrder};
use crate::poly::Q;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct FlagReport {
    pub growth: Vec<usize>,
    /// Cumulative generators of each flag level.
    pub flag_frames: Vec<Vec<VectorField>>,
    pub stabilized: bool,
}

#[derive(Debug)]
pub struct Distribution {
    chart: ChartRef,
    frame: Vec<VectorField>,
    flag: OnceLock<FlagReport>,
}

impl Clone for Distribution {
    fn clone(&self) -> Self {
        let flag = OnceLock::new();
        if let Some(f) = self.flag.get() {
            let _ = flag.set(f.clone());
        }
        Distribution {
            chart: self.chart.clone(),
            frame: self.frame.clone(),
            flag,
        }
    }
}

impl PartialEq for Distribution {
    fn eq(&self, o: &Self) -> bool {
        self.chart == o.chart && self.frame == o.frame
    }
}

impl Distribution {
    /// Builds a distribution; the frame must be independent over the
    /// fraction field.
    pub fn new(chart: &ChartRef, frame: Vec<VectorField>) -> Result<Distribution> {
        let e = frame_echelon(chart, &frame)?;
        if e.rank() < frame.len() {
            return Err(Error::DependentFrame {
                rank: e.rank(),
                len: frame.len(),
            });
        }
        Ok(Distribution {
            chart: chart.clone(),
            frame,
            flag: OnceLock::new(),
        })
    }

    /// Builds a distribution from a spanning list, keeping the first
    /// independent members.
    pub fn spanned_by(chart: &ChartRef, fields: &[VectorField]) -> Result<Distribution> {
        let mut e = Echelon::new(chart.dim(), PivotOrder::First);
        let mut frame = Vec::new();
        for f in fields {
            if f.chart() != chart {
                return Err(Error::ChartMismatch);
            }
            if e.push(f.coeffs()) {
                frame.push(f.clone());
            }
        }
        Distribution::new(chart, frame)
    }

    pub fn chart(&self) -> &ChartRef {
        &self.chart
    }

    pub fn frame(&self) -> &[VectorField] {
        &self.frame
    }

    pub fn rank(&self) -> usize {
        self.frame.len()
    }

    pub fn canonical_frame(&self) -> Vec<VectorField> {
        canonical_frame(&self.chart, &self.frame).expect("frame shares the chart")
    }

    pub fn contains(&self, v: &VectorField) -> Result<bool> {
        Ok(frame_echelon(&self.chart, &self.frame)?.contains(v.coeffs()))
    }

    pub fn same_span(&self, o: &Distribution) -> bool {
        self.chart == o.chart && self.canonical_frame() == o.canonical_frame()
    }

    pub fn is_involutive(&self) -> Result<bool> {
        let e = frame_echelon(&self.chart, &self.frame)?;
        for i in 0..self.frame.len() {
            for j in i + 1..self.frame.len() {
                if !e.contains(self.frame[i].bracket(&self.frame[j])?.coeffs()) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn full_flag(&self) -> &FlagReport {
        self.flag.get_or_init(|| compute_flag(self, self.chart.dim().max(1)))
    }

    /// Small derived flag D ⊂ D + [D, D] ⊂ D + [D, D^(2)] ⊂ ….
    ///
    /// The growth vector stops at the first level equal to the previous one
    /// or to the chart dimension, or after `max_depth` levels.
    pub fn derived_flag(&self, max_depth: usize) -> FlagReport {
        let full = self.full_flag();
        if max_depth >= full.growth.len() {
            return full.clone();
        }
        let depth = max_depth.max(1);
        FlagReport {
            growth: full.growth[..depth].to_vec(),
            flag_frames: full.flag_frames[..depth].to_vec(),
            stabilized: false,
        }
    }

    pub fn growth(&self) -> Vec<usize> {
        self.full_flag().growth.clone()
    }

    /// The k-th flag level (1-based) as a distribution.
    pub fn flag_level(&self, k: usize) -> Distribution {
        let full = self.full_flag();
        let k = k.clamp(1, full.flag_frames.len());
        Distribution::new(&self.chart, full.flag_frames[k - 1].clone())
            .expect("flag generators are independent")
    }

    /// Ranks of the evaluated flag generators at a rational point.
    pub fn growth_at_point(
        &self,
        point: &BTreeMap<String, Q>,
        jet_values: &BTreeMap<String, Q>,
    ) -> Result<Vec<usize>> {
        let full = self.full_flag();
        let mut out = Vec::new();
        for level in &full.flag_frames {
            let rows = level
                .iter()
                .map(|v| {
                    v.coeffs()
                        .iter()
                        .map(|c| c.evaluate(point, jet_values).map(Scalar::from_q))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let r = Echelon::from_rows(&rows, self.chart.dim(), PivotOrder::First).rank();
            if out.last() == Some(&r) {
                out.push(r);
                break;
            }
            out.push(r);
        }
        Ok(out)
    }

    /// Brackets [frame_i, frame_j] for i < j expressed in the frame.
    pub fn structure_coefficients(&self) -> Result<StructureTable> {
        structure_coefficients(&self.frame)
    }

    /// Ch(D) = {v ∈ D : [v, D] ⊆ D}, as an echelon frame.
    pub fn cauchy_characteristic(&self) -> Result<Distribution> {
        let e = frame_echelon(&self.chart, &self.frame)?;
        let n = self.frame.len();
        // Equations: Σ_i f_i · residue([X_i, X_j]) = 0 for every j.
        let mut eqs: Vec<Vec<Scalar>> = Vec::new();
        for j in 0..n {
            let res: Vec<Vec<Scalar>> = (0..n)
                .map(|i| Ok(e.reduce(self.frame[i].bracket(&self.frame[j])?.coeffs()).0))
                .collect::<Result<_>>()?;
            for k in 0..self.chart.dim() {
                let row: Vec<Scalar> = (0..n).map(|i| res[i][k].clone()).collect();
                if row.iter().any(|x| !x.is_zero()) {
                    eqs.push(row);
                }
            }
        }
        let sol = Echelon::from_rows(&eqs, n, PivotOrder::First).nullspace();
        let fields: Vec<VectorField> = sol
            .iter()
            .map(|f| {
                let terms: Vec<(Scalar, &VectorField)> =
                    f.iter().cloned().zip(self.frame.iter()).collect();
                VectorField::combination(&self.chart, &terms)
            })
            .collect::<Result<_>>()?;
        let frame = canonical_frame(&self.chart, &fields)?;
        let ch = Distribution::new(&self.chart, frame)?;
        if !ch.is_involutive()? {
            return Err(Error::Invariant(
                "Cauchy characteristic is not involutive".into(),
            ));
        }
        Ok(ch)
    }

    /// Quotient by a subbundle spanned by coordinate fields.
    pub fn reduce_by_integrable(&self, k: &[VectorField]) -> Result<Distribution> {
        let ke = frame_echelon(&self.chart, k)?;
        for row in ke.rows() {
            if row.iter().filter(|x| !x.is_zero()).count() != 1 {
                return Err(Error::NotCoordinateAligned);
            }
        }
        let de = frame_echelon(&self.chart, &self.frame)?;
        for v in k {
            if !de.contains(v.coeffs()) {
                return Err(Error::NotInvariant);
            }
            for x in &self.frame {
                if !de.contains(v.bracket(x)?.coeffs()) {
                    return Err(Error::NotInvariant);
                }
            }
        }
        let quotiented: Vec<String> = ke
            .pivots()
            .iter()
            .map(|&p| self.chart.coords()[p].clone())
            .collect();
        let residues: Vec<VectorField> = self
            .frame
            .iter()
            .map(|v| VectorField::from_coeffs(&self.chart, ke.reduce(v.coeffs()).0))
            .collect();
        let canon = canonical_frame(&self.chart, &residues)?;
        for v in &canon {
            for c in v.coeffs() {
                for dep in c.coordinate_dependencies() {
                    if quotiented.contains(&dep) {
                        return Err(Error::NotBasic(dep));
                    }
                }
            }
        }
        let target = self.chart.without(&quotiented)?;
        let frame = canon
            .iter()
            .map(|v| v.restrict(&target))
            .collect::<Result<Vec<_>>>()?;
        Distribution::new(&target, frame)
    }
}

fn compute_flag(d: &Distribution, max_depth: usize) -> FlagReport {
    let dim = d.chart.dim();
    let mut e = frame_echelon(&d.chart, &d.frame).expect("frame shares the chart");
    let mut current: Vec<VectorField> = d.frame.clone();
    let mut newest: Vec<VectorField> = d.frame.clone();
    let mut growth = vec![e.rank()];
    let mut frames = vec![current.clone()];
    let mut stabilized = e.rank() == dim;
    while !stabilized && growth.len() < max_depth {
        let mut added = Vec::new();
        for x in &d.frame {
            for y in &newest {
                let br = x.bracket(y).expect("frame shares the chart");
                if e.push(br.coeffs()) {
                    added.push(br);
                }
            }
        }
        current.extend(added.iter().cloned());
        growth.push(e.rank());
        frames.push(current.clone());
        stabilized = added.is_empty() || e.rank() == dim;
        newest = added;
    }
    FlagReport {
        growth,
        flag_frames: frames,
        stabilized,
    }
}

/// Entry of a structure table: [X_i, X_j] = Σ c_k X_k + residue.
#[derive(Clone, Debug, PartialEq)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub combination: Vec<Scalar>,
    pub closed: bool,
}

pub type StructureTable = Vec<BracketEntry>;

pub fn structure_coefficients(frame: &[VectorField]) -> Result<StructureTable> {
    let Some(first) = frame.first() else {
        return Ok(Vec::new());
    };
    let e = frame_echelon(first.chart(), frame)?;
    let mut out = Vec::new();
    for i in 0..frame.len() {
        for j in i + 1..frame.len() {
            let (res, comb) = e.reduce(frame[i].bracket(&frame[j])?.coeffs());
            out.push(BracketEntry {
                i,
                j,
                combination: comb,
                closed: res.iter().all(Scalar::is_zero),
            });
        }
    }
    Ok(out)
}

/// An ordered partition of a distribution's frame into named parts.
#[derive(Clone, Debug, PartialEq)]
pub struct Splitting {
    pub distribution: Distribution,
    pub parts: Vec<(String, Vec<usize>)>,
}

impl Splitting {
    pub fn new(distribution: Distribution, parts: Vec<(String, Vec<usize>)>) -> Result<Splitting> {
        let n = distribution.rank();
        let mut seen = vec![false; n];
        for (name, idx) in &parts {
            if idx.is_empty() {
                return Err(Error::InvalidSplitting(format!("part `{name}` is empty")));
            }
            for &i in idx {
                if i >= n || seen[i] {
                    return Err(Error::InvalidSplitting(format!(
                        "index {i} in part `{name}` is out of range or repeated"
                    )));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidSplitting(
                "parts do not cover the frame".into(),
            ));
        }
        Ok(Splitting {
            distribution,
            parts,
        })
    }

    pub fn part(&self, name: &str) -> Option<Vec<VectorField>> {
        self.parts.iter().find(|(n, _)| n == name).map(|(_, idx)| {
            idx.iter()
                .map(|&i| self.distribution.frame()[i].clone())
                .collect()
        })
    }

    pub fn part_fields(&self, k: usize) -> Vec<VectorField> {
        self.parts[k]
            .1
            .iter()
            .map(|&i| self.distribution.frame()[i].clone())
            .collect()
    }
}
