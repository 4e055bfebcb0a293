//! Closed-form kinematics of planar constant-strain segments and full
//! piecewise-constant-strain (PCS) robots.
//!
//! Conventions: the undeformed backbone points along the base frame's +y
//! axis; a positive heading `theta` tilts the backbone toward +x; positive
//! shear displaces cross-sections toward local +x. Headings are stored
//! unwrapped so tracked trajectories stay continuous in time.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::dual::{Dual, Scalar};

/// Below this |kappa * sigma| the arc-integral coefficients switch to their
/// Taylor expansions to avoid catastrophic cancellation.
pub(crate) const ARC_SERIES_THRESHOLD: f64 = 1e-6;

/// Relative tolerance on a^2 + b^2 under which the segment inverse
/// kinematics is declared degenerate (full-circle geometry).
const SINGULAR_GEOMETRY_TOL: f64 = 1e-12;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum KinematicsError {
    #[error("backbone coordinate {s} m outside [0, {length} m]")]
    OutOfRange { s: f64, length: f64 },
    #[error("segment {segment}: degenerate full-circle geometry, inverse kinematics singular")]
    SingularGeometry { segment: usize },
    #[error("inverse kinematics needs at least two poses, got {count}")]
    TooFewPoses { count: usize },
    #[error("backbone abscissas must be strictly increasing and non-negative")]
    InvalidAbscissas,
}

/// An SE(2) pose of a backbone cross-section: position in meters, heading in
/// radians (unwrapped).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Pose2 {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl Pose2 {
    pub const fn new(x: f64, y: f64, theta: f64) -> Self {
        Pose2 { x, y, theta }
    }

    pub const fn identity() -> Self {
        Pose2 {
            x: 0.0,
            y: 0.0,
            theta: 0.0,
        }
    }
}

/// Strain triple of one constant-strain segment: bending [1/m], shear [-],
/// axial [-]. The axial strain must stay above -1 (the backbone cannot have
/// non-positive local length).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SegmentStrains {
    pub bending: f64,
    pub shear: f64,
    pub axial: f64,
}

impl SegmentStrains {
    pub const fn new(bending: f64, shear: f64, axial: f64) -> Self {
        SegmentStrains {
            bending,
            shear,
            axial,
        }
    }
}

/// Stacked strain triples of all segments; the generalized coordinates of the
/// PCS model, flattened as (bending_1, shear_1, axial_1, bending_2, ...).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    segments: Vec<SegmentStrains>,
}

impl Configuration {
    pub fn new(segments: Vec<SegmentStrains>) -> Self {
        assert!(!segments.is_empty(), "configuration needs >= 1 segment");
        Configuration { segments }
    }

    pub fn zeros(n_segments: usize) -> Self {
        Configuration::new(vec![SegmentStrains::default(); n_segments])
    }

    pub fn segments(&self) -> &[SegmentStrains] {
        &self.segments
    }

    pub fn n_segments(&self) -> usize {
        self.segments.len()
    }

    pub fn n_q(&self) -> usize {
        3 * self.segments.len()
    }

    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n_q());
        for s in &self.segments {
            out.push(s.bending);
            out.push(s.shear);
            out.push(s.axial);
        }
        out
    }

    pub fn from_flat(q: &[f64]) -> Self {
        assert!(q.len() % 3 == 0 && !q.is_empty(), "length must be 3*n_s");
        Configuration::new(
            q.chunks_exact(3)
                .map(|c| SegmentStrains::new(c[0], c[1], c[2]))
                .collect(),
        )
    }
}

/// Geometric description of the robot: segment rest lengths [m], cross
/// section area [m^2] and second moment of area [m^4].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobotGeometry {
    pub segment_lengths: Vec<f64>,
    pub cross_section_area: f64,
    pub second_moment: f64,
}

impl RobotGeometry {
    pub fn new(segment_lengths: Vec<f64>, cross_section_area: f64, second_moment: f64) -> Self {
        assert!(
            segment_lengths.iter().all(|&l| l > 0.0),
            "segment lengths must be positive"
        );
        assert!(cross_section_area > 0.0 && second_moment > 0.0);
        RobotGeometry {
            segment_lengths,
            cross_section_area,
            second_moment,
        }
    }

    /// Geometry of a rod with circular cross section of the given radius.
    pub fn with_circular_section(segment_lengths: Vec<f64>, radius: f64) -> Self {
        let area = std::f64::consts::PI * radius * radius;
        let second = std::f64::consts::PI * radius.powi(4) / 4.0;
        RobotGeometry::new(segment_lengths, area, second)
    }

    pub fn n_segments(&self) -> usize {
        self.segment_lengths.len()
    }

    pub fn n_q(&self) -> usize {
        3 * self.segment_lengths.len()
    }

    pub fn total_length(&self) -> f64 {
        self.segment_lengths.iter().sum()
    }

    /// Segment index and local arc coordinate for a global abscissa.
    pub(crate) fn locate(&self, s: f64) -> Result<(usize, f64), KinematicsError> {
        let length = self.total_length();
        if !(0.0..=length + 1e-12).contains(&s) {
            return Err(KinematicsError::OutOfRange { s, length });
        }
        let mut start = 0.0;
        for (i, &l) in self.segment_lengths.iter().enumerate() {
            if s <= start + l || i == self.segment_lengths.len() - 1 {
                return Ok((i, (s - start).clamp(0.0, l)));
            }
            start += l;
        }
        unreachable!()
    }
}

/// Marker abscissas along the backbone, strictly increasing, in [0, L].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackboneAbscissas(Vec<f64>);

impl BackboneAbscissas {
    pub fn new(s: Vec<f64>) -> Result<Self, KinematicsError> {
        if s.is_empty() || s[0] < 0.0 || s.windows(2).any(|w| w[1] <= w[0]) {
            return Err(KinematicsError::InvalidAbscissas);
        }
        Ok(BackboneAbscissas(s))
    }

    /// `n` markers equally spaced over [0, L], the first at the base and the
    /// last at the tip.
    pub fn equally_spaced(n: usize, total_length: f64) -> Self {
        assert!(n >= 2);
        BackboneAbscissas(
            (0..n)
                .map(|j| total_length * j as f64 / (n - 1) as f64)
                .collect(),
        )
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

// ---------------------------------------------------------------------------
// Generic closed-form kinematics (shared by f64 evaluation and dual-number
// differentiation).
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub(crate) struct GPose<T: Scalar> {
    pub x: T,
    pub y: T,
    pub theta: T,
}

impl<T: Scalar> GPose<T> {
    pub(crate) fn identity() -> Self {
        GPose {
            x: T::zero(),
            y: T::zero(),
            theta: T::zero(),
        }
    }
}

/// Arc-integral coefficients a = sin(k*s)/k, b = (1 - cos(k*s))/k with the
/// small-angle branch expressed as a Taylor series in x = k*s.
pub(crate) fn arc_coeffs<T: Scalar>(kappa: T, sigma: T) -> (T, T) {
    let x = kappa * sigma;
    if x.value().abs() < ARC_SERIES_THRESHOLD {
        arc_coeffs_series(x, sigma)
    } else {
        arc_coeffs_exact(kappa, x, sigma)
    }
}

pub(crate) fn arc_coeffs_exact<T: Scalar>(kappa: T, x: T, _sigma: T) -> (T, T) {
    let a = x.sin() / kappa;
    // 1 - cos x = 2 sin^2(x/2), free of cancellation for small x
    let half_sin = x.scale(0.5).sin();
    let b = (half_sin * half_sin).scale(2.0) / kappa;
    (a, b)
}

pub(crate) fn arc_coeffs_series<T: Scalar>(x: T, sigma: T) -> (T, T) {
    let x2 = x * x;
    // sin(x)/x and (1-cos x)/x through fourth order
    let sinc = T::one() - x2.scale(1.0 / 6.0) + x2 * x2.scale(1.0 / 120.0);
    let vers = x.scale(0.5) - x * x2.scale(1.0 / 24.0) + x * x2 * x2.scale(1.0 / 720.0);
    (sigma * sinc, sigma * vers)
}

/// Advance a pose along one constant-strain segment by local arc length
/// `sigma`.
pub(crate) fn advance_pose<T: Scalar>(
    pose: &GPose<T>,
    bending: T,
    shear: T,
    axial: T,
    sigma: T,
) -> GPose<T> {
    let (a, b) = arc_coeffs(bending, sigma);
    let stretch = T::one() + axial;
    let dx = a * shear + b * stretch;
    let dy = -(b * shear) + a * stretch;
    let (sin0, cos0) = (pose.theta.sin(), pose.theta.cos());
    GPose {
        x: pose.x + cos0 * dx + sin0 * dy,
        y: pose.y - sin0 * dx + cos0 * dy,
        theta: pose.theta + bending * sigma,
    }
}

/// Pose along a PCS robot with generic scalar configuration `q`
/// (3 entries per segment), at segment `seg_idx`, local coordinate `sigma`.
pub(crate) fn chain_pose<T: Scalar>(
    lengths: &[f64],
    q: &[T],
    seg_idx: usize,
    sigma: f64,
) -> GPose<T> {
    debug_assert_eq!(q.len(), 3 * lengths.len());
    let mut pose = GPose::identity();
    for (i, &l) in lengths.iter().take(seg_idx).enumerate() {
        pose = advance_pose(
            &pose,
            q[3 * i],
            q[3 * i + 1],
            q[3 * i + 2],
            T::from_f64(l),
        );
    }
    advance_pose(
        &pose,
        q[3 * seg_idx],
        q[3 * seg_idx + 1],
        q[3 * seg_idx + 2],
        T::from_f64(sigma),
    )
}

/// One proximal-to-distal sweep evaluating poses at many sample points,
/// `samples` given as (segment index, local sigma) sorted by segment.
pub(crate) fn chain_sweep<T: Scalar>(
    lengths: &[f64],
    q: &[T],
    samples: &[(usize, f64)],
    out: &mut Vec<GPose<T>>,
) {
    debug_assert_eq!(q.len(), 3 * lengths.len());
    out.clear();
    let mut pose = GPose::identity();
    let mut k = 0;
    for (i, &l) in lengths.iter().enumerate() {
        let (be, sh, ax) = (q[3 * i], q[3 * i + 1], q[3 * i + 2]);
        while k < samples.len() && samples[k].0 == i {
            out.push(advance_pose(&pose, be, sh, ax, T::from_f64(samples[k].1)));
            k += 1;
        }
        pose = advance_pose(&pose, be, sh, ax, T::from_f64(l));
    }
    debug_assert_eq!(k, samples.len(), "samples must be sorted by segment");
}

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

/// Pose at local arc coordinate `sigma` of a single constant-strain segment
/// rooted at `base`. Requires `0 <= sigma <= segment length`.
pub fn segment_fk(base: Pose2, strains: SegmentStrains, sigma: f64) -> Pose2 {
    debug_assert!(sigma >= 0.0);
    let g = advance_pose(
        &GPose {
            x: base.x,
            y: base.y,
            theta: base.theta,
        },
        strains.bending,
        strains.shear,
        strains.axial,
        sigma,
    );
    Pose2::new(g.x, g.y, g.theta)
}

/// Pose at backbone abscissa `s` of the full robot, base clamped at the
/// identity.
pub fn robot_fk(geom: &RobotGeometry, q: &Configuration, s: f64) -> Result<Pose2, KinematicsError> {
    assert_eq!(q.n_segments(), geom.n_segments());
    let (seg, sigma) = geom.locate(s)?;
    let flat = q.flatten();
    let g = chain_pose(&geom.segment_lengths, &flat, seg, sigma);
    Ok(Pose2::new(g.x, g.y, g.theta))
}

/// Strains of the constant-strain segment of rest length `length` connecting
/// `pose_a` to `pose_b`, the closed-form inverse of [`segment_fk`].
///
/// For standalone calls the segment index in a
/// [`KinematicsError::SingularGeometry`] is 0; [`robot_ik`] rewrites it.
pub fn segment_ik(
    pose_a: Pose2,
    pose_b: Pose2,
    length: f64,
) -> Result<SegmentStrains, KinematicsError> {
    assert!(length > 0.0);
    let bending = (pose_b.theta - pose_a.theta) / length;
    let (a, b) = arc_coeffs(bending, length);
    let det = a * a + b * b;
    if det < SINGULAR_GEOMETRY_TOL * length * length {
        return Err(KinematicsError::SingularGeometry { segment: 0 });
    }
    let (dx_w, dy_w) = (pose_b.x - pose_a.x, pose_b.y - pose_a.y);
    let (sin0, cos0) = pose_a.theta.sin_cos();
    // express the chord in frame a
    let dx = cos0 * dx_w - sin0 * dy_w;
    let dy = sin0 * dx_w + cos0 * dy_w;
    let shear = (a * dx - b * dy) / det;
    let stretch = (b * dx + a * dy) / det;
    Ok(SegmentStrains::new(bending, shear, stretch - 1.0))
}

/// Closed-form inverse kinematics of the whole robot: one constant-strain
/// segment per adjacent marker pair. A base marker at s = 0 is implied; if
/// the first abscissa is positive, the identity pose is prepended.
pub fn robot_ik(
    poses: &[Pose2],
    s: &BackboneAbscissas,
) -> Result<Configuration, KinematicsError> {
    let abscissas = s.as_slice();
    assert_eq!(poses.len(), abscissas.len());
    let mut chain: Vec<(f64, Pose2)> = Vec::with_capacity(poses.len() + 1);
    if abscissas.first().copied() != Some(0.0) {
        chain.push((0.0, Pose2::identity()));
    }
    chain.extend(abscissas.iter().copied().zip(poses.iter().copied()));
    if chain.len() < 2 {
        return Err(KinematicsError::TooFewPoses { count: poses.len() });
    }
    let mut segments = Vec::with_capacity(chain.len() - 1);
    for (i, pair) in chain.windows(2).enumerate() {
        let (s0, p0) = pair[0];
        let (s1, p1) = pair[1];
        segments.push(segment_ik(p0, p1, s1 - s0).map_err(|e| match e {
            KinematicsError::SingularGeometry { .. } => {
                KinematicsError::SingularGeometry { segment: i }
            }
            other => other,
        })?);
    }
    Ok(Configuration::new(segments))
}

/// Exact Jacobian d pose(q, s) / dq (3 x n_q), computed by forward-mode
/// differentiation of the closed-form chain. Columns of segments distal to
/// `s` are zero.
pub fn pose_jacobian(
    geom: &RobotGeometry,
    q: &Configuration,
    s: f64,
) -> Result<DMatrix<f64>, KinematicsError> {
    let (seg, sigma) = geom.locate(s)?;
    let flat = q.flatten();
    let n_q = flat.len();
    let mut jac = DMatrix::zeros(3, n_q);
    let mut dq: Vec<Dual<f64>> = flat.iter().map(|&v| Dual::constant(v)).collect();
    for j in 0..n_q {
        if j / 3 > seg {
            break; // distal coordinates cannot move this point
        }
        dq[j].du = 1.0;
        let g = chain_pose(&geom.segment_lengths, &dq, seg, sigma);
        jac[(0, j)] = g.x.du;
        jac[(1, j)] = g.y.du;
        jac[(2, j)] = g.theta.du;
        dq[j].du = 0.0;
    }
    Ok(jac)
}
