//! Sweeps and optimization over the `(l, D)` design space.
//!
//! Points are independent, so a sweep can be split across threads by the
//! caller; [`evaluate`] is the unit of work and [`sweep`] is the sequential
//! reference ordering (row-major: `l` outer, `D` inner).

use alloc::vec::Vec;

use crate::mechanics::{energy_barrier, snap_timescale, BucklingModel, Material, RibbonGeometry, SectionConvention};
use crate::{Error, Result};

/// Closed range `[min, max]` sampled every `step` (m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRange {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl AxisRange {
    pub fn new(min: f64, max: f64, step: f64) -> Result<Self> {
        let r = Self { min, max, step };
        r.validate()?;
        Ok(r)
    }

    /// `min == max` is a valid single-node range.
    pub fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite() && self.min > 0.0 && self.min <= self.max) {
            return Err(Error::Validation { field: "range", reason: "need 0 < min <= max" });
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::Validation { field: "step", reason: "must be strictly positive" });
        }
        Ok(())
    }

    /// Grid nodes `min + i·step` up to `max` (with a 1e-9·step allowance
    /// for rounding). Nodes are generated by multiplication, not accumulation.
    pub fn nodes(&self) -> Vec<f64> {
        let count = libm::floor((self.max - self.min) / self.step + 1e-9) as usize + 1;
        (0..count).map(|i| self.min + self.step * i as f64).collect()
    }

    pub fn len(&self) -> usize {
        self.nodes().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// The swept region plus everything held fixed while sweeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignGrid {
    pub half_length: AxisRange,
    pub locking_displacement: AxisRange,
    pub material: Material,
    /// Ribbon width `h` (m).
    pub width: f64,
    /// Sheet thickness `t` (m).
    pub thickness: f64,
    pub convention: SectionConvention,
}

impl DesignGrid {
    /// `l ∈ [80, 200] mm` step 5 mm and `D ∈ [5, 30] mm` step 1 mm.
    pub fn standard(material: Material, width: f64, thickness: f64, convention: SectionConvention) -> Self {
        Self {
            half_length: AxisRange { min: 0.080, max: 0.200, step: 0.005 },
            locking_displacement: AxisRange { min: 0.005, max: 0.030, step: 0.001 },
            material,
            width,
            thickness,
            convention,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.half_length.validate()?;
        self.locking_displacement.validate()?;
        self.material.validate()
    }

    fn geometry(&self, half_length: f64, locking_displacement: f64) -> RibbonGeometry {
        RibbonGeometry { half_length, locking_displacement, width: self.width, thickness: self.thickness }
    }
}

/// Model outputs at one `(l, D)` node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignPoint {
    pub half_length: f64,
    pub locking_displacement: f64,
    /// `ψ_l` (rad).
    pub tip_angle: f64,
    /// `U_barr` (J).
    pub barrier: f64,
    /// `P_cr` (N).
    pub critical_load: f64,
    /// `t*` (s).
    pub snap_time: f64,
}

/// One sweep node; failures are kept in place rather than dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntry {
    pub half_length: f64,
    pub locking_displacement: f64,
    pub outcome: Result<DesignPoint>,
}

pub fn evaluate(
    model: &BucklingModel,
    grid: &DesignGrid,
    half_length: f64,
    locking_displacement: f64,
) -> Result<DesignPoint> {
    let geometry = grid.geometry(half_length, locking_displacement);
    let solution = model.solve(&grid.material, &geometry, grid.convention)?;
    let point = DesignPoint {
        half_length,
        locking_displacement,
        tip_angle: solution.tip_angle,
        barrier: energy_barrier(solution.critical_load, locking_displacement)?,
        critical_load: solution.critical_load,
        snap_time: snap_timescale(&geometry, &grid.material)?,
    };
    let finite = [point.tip_angle, point.barrier, point.critical_load, point.snap_time]
        .iter()
        .all(|v| v.is_finite() && *v > 0.0);
    if !finite {
        return Err(Error::Domain { what: "design outputs", value: point.tip_angle });
    }
    Ok(point)
}

/// `(l, D)` pairs in row-major order.
pub fn grid_nodes(grid: &DesignGrid) -> Vec<(f64, f64)> {
    let ds = grid.locking_displacement.nodes();
    grid.half_length.nodes().into_iter().flat_map(|l| ds.iter().map(move |&d| (l, d))).collect()
}

pub fn sweep(grid: &DesignGrid) -> Result<Vec<SweepEntry>> {
    grid.validate()?;
    let model = BucklingModel::new()?;
    Ok(grid_nodes(grid)
        .into_iter()
        .map(|(l, d)| SweepEntry { half_length: l, locking_displacement: d, outcome: evaluate(&model, grid, l, d) })
        .collect())
}

/// What to maximize.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    MaximizeTipAngle,
    MaximizeBarrier,
    /// `w_ψ·ψ_l[rad] + w_U·U_barr[mJ]`.
    WeightedSum {
        tip_angle: f64,
        barrier: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignObjective {
    pub target: Target,
    /// Largest acceptable `U_barr` (J); `f64::INFINITY` for no limit.
    pub budget: f64,
    pub half_length_bounds: Option<(f64, f64)>,
    pub locking_displacement_bounds: Option<(f64, f64)>,
}

impl DesignObjective {
    pub fn new(target: Target, budget: f64) -> Self {
        Self { target, budget, half_length_bounds: None, locking_displacement_bounds: None }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.budget > 0.0) {
            return Err(Error::Validation { field: "budget", reason: "must be strictly positive" });
        }
        if let Target::WeightedSum { tip_angle, barrier } = self.target {
            if !(tip_angle >= 0.0 && barrier >= 0.0) || tip_angle + barrier == 0.0 {
                return Err(Error::Validation { field: "weights", reason: "must be non-negative and not both zero" });
            }
        }
        for (field, b) in [
            ("half_length_bounds", self.half_length_bounds),
            ("locking_displacement_bounds", self.locking_displacement_bounds),
        ] {
            if let Some((lo, hi)) = b {
                if !(lo <= hi) {
                    return Err(Error::Validation { field, reason: "lower bound exceeds upper bound" });
                }
            }
        }
        Ok(())
    }

    pub fn score(&self, p: &DesignPoint) -> f64 {
        match self.target {
            Target::MaximizeTipAngle => p.tip_angle,
            Target::MaximizeBarrier => p.barrier,
            Target::WeightedSum { tip_angle, barrier } => tip_angle * p.tip_angle + barrier * p.barrier * 1e3,
        }
    }

    pub fn is_feasible(&self, p: &DesignPoint) -> bool {
        let within = |v: f64, b: Option<(f64, f64)>| b.is_none_or(|(lo, hi)| v >= lo && v <= hi);
        p.barrier <= self.budget
            && within(p.half_length, self.half_length_bounds)
            && within(p.locking_displacement, self.locking_displacement_bounds)
    }

    /// Strictly better score, or equal score at smaller `l`, then smaller `D`.
    fn prefers(&self, candidate: &DesignPoint, incumbent: &DesignPoint) -> bool {
        let (a, b) = (self.score(candidate), self.score(incumbent));
        if a != b {
            return a > b;
        }
        (candidate.half_length, candidate.locking_displacement)
            < (incumbent.half_length, incumbent.locking_displacement)
    }
}

/// A rectangular search box `[l_lo, l_hi] × [d_lo, d_hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBox {
    pub half_length: (f64, f64),
    pub locking_displacement: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub point: DesignPoint,
    /// Best feasible node of the coarse grid.
    pub coarse_best: DesignPoint,
    /// Search box of each refinement level, outermost first.
    pub boxes: Vec<SearchBox>,
    /// True when the incumbent's barrier is within 1% of the budget.
    pub budget_active: bool,
}

/// Refinement levels after the coarse scan.
pub const REFINEMENT_LEVELS: usize = 6;
const REFINEMENT_NODES: usize = 5;

/// Coarse scan of the grid followed by repeated box halving around the
/// incumbent.
pub fn optimize(objective: &DesignObjective, grid: &DesignGrid) -> Result<Optimum> {
    objective.validate()?;
    grid.validate()?;
    if grid.half_length.len() < 2 || grid.locking_displacement.len() < 2 {
        return Err(Error::Validation { field: "grid", reason: "optimization needs at least a 2x2 grid" });
    }
    let model = BucklingModel::new()?;
    let mut best: Option<DesignPoint> = None;
    let mut min_barrier = f64::INFINITY;
    for (l, d) in grid_nodes(grid) {
        let p = evaluate(&model, grid, l, d)?;
        min_barrier = min_barrier.min(p.barrier);
        if objective.is_feasible(&p) && best.as_ref().is_none_or(|b| objective.prefers(&p, b)) {
            best = Some(p);
        }
    }
    let coarse_best = best.ok_or(Error::Infeasible { budget: objective.budget, min_barrier })?;

    let clamp_range = |range: &AxisRange, bounds: Option<(f64, f64)>| {
        let (lo, hi) = bounds.unwrap_or((range.min, range.max));
        (lo.max(range.min), hi.min(range.max))
    };
    let l_limits = clamp_range(&grid.half_length, objective.half_length_bounds);
    let d_limits = clamp_range(&grid.locking_displacement, objective.locking_displacement_bounds);

    let mut incumbent = coarse_best;
    let mut l_half = grid.half_length.step;
    let mut d_half = grid.locking_displacement.step;
    let mut boxes = Vec::with_capacity(REFINEMENT_LEVELS);
    for _ in 0..REFINEMENT_LEVELS {
        let bx = SearchBox {
            half_length: (incumbent.half_length - l_half, incumbent.half_length + l_half),
            locking_displacement: (incumbent.locking_displacement - d_half, incumbent.locking_displacement + d_half),
        };
        boxes.push(bx);
        for i in 0..REFINEMENT_NODES {
            for j in 0..REFINEMENT_NODES {
                let fi = i as f64 / (REFINEMENT_NODES - 1) as f64;
                let fj = j as f64 / (REFINEMENT_NODES - 1) as f64;
                let l = bx.half_length.0 + (bx.half_length.1 - bx.half_length.0) * fi;
                let d = bx.locking_displacement.0 + (bx.locking_displacement.1 - bx.locking_displacement.0) * fj;
                if l < l_limits.0 || l > l_limits.1 || d < d_limits.0 || d > d_limits.1 {
                    continue;
                }
                let p = evaluate(&model, grid, l, d)?;
                if objective.is_feasible(&p) && objective.prefers(&p, &incumbent) {
                    incumbent = p;
                }
            }
        }
        l_half *= 0.5;
        d_half *= 0.5;
    }
    let budget_active = objective.budget.is_finite() && incumbent.barrier >= 0.99 * objective.budget;
    Ok(Optimum { point: incumbent, coarse_best, boxes, budget_active })
}
