//! The analysis pipeline and its JSON report.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use torifan_core::arrows::{critical_arrows_bounded, Arrow, LevelCheck, UniqueMinProof};
use torifan_core::delta::{delta_fan_with_budget, theta_with_budget};
use torifan_core::linalg::{Int, Rat};
use torifan_core::{
    check_subdivision, classify_divisors_bounded, convex_moderate_check, dual_cone, hilbert_basis, is_crepant,
    is_moderate, min_cone_dim_bound, minimal_s_sigma, primitive_of, ray_sufficient_test, verify_certificate, Cone,
    CriticalCertificate, DeltaFan, Error, Fan, LatticeVector, RationalVector, ThetaData, TieBreaker,
};

use crate::error::{CliError, CliResult};
use crate::json::{lattice, qvec, rational, zvec, Q, Z};
use crate::request::{AnalysisRequest, Command, ConeSpec, FanSpec};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct InputEcho {
    pub rank: usize,
    pub rays: Vec<Vec<Z>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ConeSection {
    pub dim: usize,
    pub rays: Vec<Vec<Z>>,
    pub facets: Vec<Vec<Z>>,
    pub simplicial: bool,
    pub smooth: bool,
}

impl ConeSection {
    fn of(c: &Cone) -> Self {
        ConeSection {
            dim: c.dim(),
            rays: c.rays().iter().map(zvec).collect(),
            facets: c.facets().iter().map(zvec).collect(),
            simplicial: c.is_simplicial(),
            smooth: c.is_smooth(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct HilbertSection {
    /// Hilbert basis of the dual monoid `A`.
    pub a: Vec<Vec<Z>>,
    /// Hilbert basis of `B = σ ∩ N`.
    pub b: Vec<Vec<Z>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SSigmaSection {
    pub elements: Vec<Vec<Z>>,
    pub certified: bool,
    pub functional: Vec<Z>,
    pub height_bound: Z,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DivisorRow {
    pub ray: Vec<Z>,
    pub is_ray_of_sigma: bool,
    pub in_hilbert_basis_b: bool,
    pub bgs_essential: bool,
    /// `null` when the search for minimal elements was not certified.
    pub essential: Option<bool>,
    pub sufficient_condition: bool,
    pub arrow_dim_bound: Option<usize>,
    pub in_delta: Option<bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RayTestRow {
    pub w: Vec<Z>,
    pub holds: bool,
    pub witness: Option<Vec<Z>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ArrowDoc {
    pub head: Vec<Q>,
    pub tail: Vec<Q>,
    pub vector: Vec<Q>,
    pub integral: bool,
    pub level: Q,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TieBreakerDoc {
    pub weight: Vec<Z>,
    pub vector: Vec<Q>,
    pub chamber_witness: Vec<Q>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LevelCheckDoc {
    pub level: Q,
    pub has_point: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct UniqueMinDoc {
    pub tail_value: Q,
    pub other_vertex_values: Vec<Q>,
    pub recession_values: Vec<Q>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CertificateDoc {
    pub arrow: ArrowDoc,
    pub tie_breaker: TieBreakerDoc,
    pub level_c: Q,
    pub no_lower_point_proof: Vec<LevelCheckDoc>,
    pub unique_min_proof: UniqueMinDoc,
}

impl CertificateDoc {
    pub fn of(c: &CriticalCertificate) -> Self {
        let qs = |v: &[Rat]| v.iter().cloned().map(Q).collect::<Vec<_>>();
        CertificateDoc {
            arrow: ArrowDoc {
                head: qvec(&c.arrow.head),
                tail: qvec(&c.arrow.tail),
                vector: qvec(&c.arrow.vector),
                integral: c.arrow.integral,
                level: Q(c.arrow.level.clone()),
            },
            tie_breaker: TieBreakerDoc {
                weight: zvec(&c.tie_breaker.weight),
                vector: qvec(&c.tie_breaker.vector),
                chamber_witness: qvec(&c.tie_breaker.chamber_witness),
            },
            level_c: Q(c.level_c.clone()),
            no_lower_point_proof: c
                .no_lower_point_proof
                .iter()
                .map(|l| LevelCheckDoc {
                    level: Q(l.level.clone()),
                    has_point: l.has_point,
                })
                .collect(),
            unique_min_proof: UniqueMinDoc {
                tail_value: Q(c.unique_min_proof.tail_value.clone()),
                other_vertex_values: qs(&c.unique_min_proof.other_vertex_values),
                recession_values: qs(&c.unique_min_proof.recession_values),
            },
        }
    }

    /// The certificate exactly as stored; derived fields are not recomputed.
    pub fn to_certificate(&self) -> CriticalCertificate {
        let unq = |v: &[Q]| v.iter().map(|q| q.0.clone()).collect::<Vec<_>>();
        CriticalCertificate {
            arrow: Arrow {
                head: rational(&self.arrow.head),
                tail: rational(&self.arrow.tail),
                vector: rational(&self.arrow.vector),
                integral: self.arrow.integral,
                level: self.arrow.level.0.clone(),
            },
            tie_breaker: TieBreaker {
                weight: lattice(&self.tie_breaker.weight),
                vector: rational(&self.tie_breaker.vector),
                chamber_witness: rational(&self.tie_breaker.chamber_witness),
            },
            level_c: self.level_c.0.clone(),
            no_lower_point_proof: self
                .no_lower_point_proof
                .iter()
                .map(|l| LevelCheck {
                    level: l.level.0.clone(),
                    has_point: l.has_point,
                })
                .collect(),
            unique_min_proof: UniqueMinProof {
                tail_value: self.unique_min_proof.tail_value.0.clone(),
                other_vertex_values: unq(&self.unique_min_proof.other_vertex_values),
                recession_values: unq(&self.unique_min_proof.recession_values),
            },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ArrowSection {
    pub w: Vec<Z>,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diameter_sq: Option<Q>,
    pub tie_breakers: usize,
    pub dim_bound: Option<usize>,
    pub certificates: Vec<CertificateDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GridCheck {
    pub l: u32,
    pub cones_checked: usize,
    pub points_checked: usize,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DeltaSection {
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diameter_sq: Option<Q>,
    pub rays: Vec<Vec<Z>>,
    /// Indices into `rays`.
    pub maximal_cones: Vec<Vec<usize>>,
    pub complement_cells: usize,
    pub relevant_hyperplanes: usize,
    pub pieces: usize,
    pub distinct_fingerprints: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_check: Option<GridCheck>,
}

impl DeltaSection {
    pub fn fan_spec(&self, rank: usize) -> FanSpec {
        FanSpec {
            rank,
            rays: self.rays.iter().map(|r| lattice(r)).collect(),
            cones: self.maximal_cones.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SubdivisionRow {
    pub kind: String,
    pub rays: Vec<Vec<Z>>,
    pub cones: Vec<Vec<usize>>,
    pub valid: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub is_moderate: Option<bool>,
    pub convex_moderate: Option<bool>,
    pub is_crepant: Option<bool>,
    /// Every ray primitive is an element of the Hilbert basis of `B`.
    pub rays_in_hilbert_basis: Option<bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Certification {
    pub s_sigma_certified: Option<bool>,
    pub certificates_verified: bool,
    pub grid_agrees: Option<bool>,
}

impl Certification {
    /// Checks that passed or were not run; an uncertified search is not a failure.
    pub fn ok(&self) -> bool {
        self.certificates_verified && self.grid_agrees != Some(false)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Report {
    pub input: InputEcho,
    pub cone: ConeSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual: Option<ConeSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hilbert: Option<HilbertSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minimal_s_sigma: Option<SSigmaSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub divisors: Vec<DivisorRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ray_tests: Vec<RayTestRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub arrows: Vec<ArrowSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<DeltaSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subdivisions: Vec<SubdivisionRow>,
    pub certification: Certification,
    /// Wall-clock microseconds per stage; the only nondeterministic field.
    #[serde(default)]
    pub timing_us: BTreeMap<String, u64>,
}

impl Report {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn without_timing(&self) -> Report {
        Report {
            timing_us: BTreeMap::new(),
            ..self.clone()
        }
    }

    /// Whether a section was skipped because of the cell budget.
    pub fn budget_skipped(&self) -> bool {
        self.delta.as_ref().is_some_and(|d| d.status == "skipped") || self.arrows.iter().any(|a| a.status == "skipped")
    }
}

struct Timer(BTreeMap<String, u64>);

impl Timer {
    fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        *self.0.entry(stage.to_string()).or_default() += t.elapsed().as_micros() as u64;
        out
    }
}

fn skipped(e: &Error) -> Option<String> {
    matches!(e, Error::BudgetExceeded { .. }).then(|| e.to_string())
}

/// `Σ (2·max|m(r_i)| + 1)^i r_i` over the rays of `tau`: no nonzero `m` of
/// `M_{≤D}` vanishes on it.
fn general_weight(tau: &Cone, theta: &ThetaData) -> LatticeVector {
    let big = theta
        .m_le_d
        .iter()
        .flat_map(|m| tau.rays().iter().map(move |r| m.dot(r).abs()))
        .max()
        .unwrap_or_default();
    let base = big * Int::from(2) + Int::one();
    let mut scale = Int::one();
    let mut w = LatticeVector::zero(tau.ambient_dim());
    for r in tau.rays() {
        w = w.add(&r.scale(&scale));
        scale *= &base;
    }
    w
}

/// Compares the cell fingerprint with the grid oracle inside every maximal cone.
fn grid_check(delta: &DeltaFan, l: u32) -> CliResult<GridCheck> {
    let theta = &delta.theta;
    let (lo, hi) = theta.window();
    let lr = Rat::from_integer(Int::from(l));
    let zlo: Vec<Int> = lo.iter().map(|x| (x * &lr).ceil().to_integer()).collect();
    let zhi: Vec<Int> = hi.iter().map(|x| (x * &lr).floor().to_integer()).collect();
    let mut agree = true;
    let mut points = 0;
    for tau in delta.fan.maximal_cones() {
        let w = general_weight(tau, theta).to_rational();
        let fp = torifan_core::xi_fingerprint(&w, theta)?;
        let covered: BTreeSet<usize> = fp.covered_cells.into_iter().collect();
        let grid: BTreeSet<RationalVector> = torifan_core::xi_grid_oracle(theta, &w, l, &lo, &hi)?.into_iter().collect();
        let mut z = zlo.clone();
        'points: loop {
            let x = RationalVector::new(z.iter().map(|c| Rat::from_integer(c.clone()) / &lr).collect());
            if theta.dual.contains(&x) {
                points += 1;
                let expected = theta.in_theta(&x) || theta.cell_of(&x).is_some_and(|c| covered.contains(&c));
                agree &= expected == grid.contains(&x);
            }
            for k in 0..z.len() {
                z[k] += 1;
                if z[k] <= zhi[k] {
                    continue 'points;
                }
                z[k] = zlo[k].clone();
            }
            break;
        }
    }
    Ok(GridCheck {
        l,
        cones_checked: delta.fan.maximal_cones().len(),
        points_checked: points,
        agree,
    })
}

fn delta_section(delta: &DeltaFan) -> DeltaSection {
    let rays = delta.fan.rays();
    let maximal_cones = delta
        .fan
        .maximal_cones()
        .iter()
        .map(|c| {
            c.rays()
                .iter()
                .map(|r| rays.binary_search(r).expect("fan ray"))
                .collect()
        })
        .collect();
    DeltaSection {
        status: "ok".into(),
        reason: None,
        diameter_sq: Some(Q(delta.theta.diameter_sq.clone())),
        rays: rays.iter().map(zvec).collect(),
        maximal_cones,
        complement_cells: delta.theta.complement_cells.len(),
        relevant_hyperplanes: delta.hyperplanes,
        pieces: delta.chambers,
        distinct_fingerprints: delta.distinct_fingerprints,
        grid_check: None,
    }
}

fn skipped_delta(reason: String) -> DeltaSection {
    DeltaSection {
        status: "skipped".into(),
        reason: Some(reason),
        diameter_sq: None,
        rays: Vec::new(),
        maximal_cones: Vec::new(),
        complement_cells: 0,
        relevant_hyperplanes: 0,
        pieces: 0,
        distinct_fingerprints: 0,
        grid_check: None,
    }
}

fn subdivision_row(kind: &str, spec: &FanSpec, sigma: &Cone, hb: &[LatticeVector]) -> CliResult<SubdivisionRow> {
    let mut row = SubdivisionRow {
        kind: kind.into(),
        rays: spec.rays.iter().map(zvec).collect(),
        cones: spec.cones.clone(),
        valid: false,
        reason: None,
        is_moderate: None,
        convex_moderate: None,
        is_crepant: None,
        rays_in_hilbert_basis: None,
    };
    let fan = match spec.fan() {
        Ok(f) => f,
        Err(CliError::Core(e)) => {
            row.reason = Some(e.to_string());
            return Ok(row);
        }
        Err(e) => return Err(e),
    };
    if let Err(e) = check_subdivision(&fan, sigma) {
        row.reason = Some(e.to_string());
        return Ok(row);
    }
    row.valid = true;
    row.rays_in_hilbert_basis = Some(fan.rays().iter().all(|r| hb.binary_search(r).is_ok()));
    if kind == "moderate" {
        row.is_moderate = Some(is_moderate(&fan, sigma)?);
        row.convex_moderate = Some(convex_moderate_check(&fan, sigma, hb)?);
    } else {
        row.is_crepant = Some(is_crepant(&fan, sigma)?);
        row.is_moderate = Some(is_moderate(&fan, sigma)?);
    }
    Ok(row)
}

/// Runs every requested stage. Budget overruns mark sections as skipped;
/// other failures are errors.
pub fn run_report(req: &AnalysisRequest) -> CliResult<Report> {
    let mut timer = Timer(BTreeMap::new());
    let sigma = timer.time("cone", || req.cone.cone())?;
    let has = |f: fn(&Command) -> bool| req.commands.iter().any(f);
    let full = has(|c| matches!(c, Command::Report));
    let weights = |f: fn(&Command) -> Option<&LatticeVector>| -> Vec<LatticeVector> {
        req.commands.iter().filter_map(f).cloned().collect()
    };
    let ray_tests = weights(|c| if let Command::RayTest(w) = c { Some(w) } else { None });
    let arrow_weights = weights(|c| if let Command::Arrows(w) = c { Some(w) } else { None });
    let want_dual = full || has(|c| matches!(c, Command::Dual));
    let want_divisors = full || has(|c| matches!(c, Command::Divisors));
    let want_delta = full || has(|c| matches!(c, Command::Delta));
    let want_hilbert = full
        || want_divisors
        || has(|c| matches!(c, Command::Hilbert | Command::Moderate(_) | Command::Crepant(_)));
    let budget = req.options.cell_budget;

    let mut report = Report {
        input: InputEcho {
            rank: req.cone.rank,
            rays: req.cone.rays.iter().map(zvec).collect(),
        },
        cone: ConeSection::of(&sigma),
        dual: None,
        hilbert: None,
        minimal_s_sigma: None,
        divisors: Vec::new(),
        ray_tests: Vec::new(),
        arrows: Vec::new(),
        delta: None,
        subdivisions: Vec::new(),
        certification: Certification {
            s_sigma_certified: None,
            certificates_verified: true,
            grid_agrees: None,
        },
        timing_us: BTreeMap::new(),
    };

    let needs_dual = want_dual || want_hilbert || want_delta || !ray_tests.is_empty() || !arrow_weights.is_empty();
    let a = if needs_dual { Some(timer.time("dual", || dual_cone(&sigma))?) } else { None };
    if want_dual {
        report.dual = a.as_ref().map(ConeSection::of);
    }

    let mut hb_b: Vec<LatticeVector> = Vec::new();
    if want_hilbert {
        let a = a.as_ref().expect("dual computed");
        let (ha, hb) = timer.time("hilbert", || -> CliResult<_> { Ok((hilbert_basis(a)?, hilbert_basis(&sigma)?)) })?;
        hb_b = hb.elements().to_vec();
        report.hilbert = Some(HilbertSection {
            a: ha.elements().iter().map(zvec).collect(),
            b: hb_b.iter().map(zvec).collect(),
        });
    }

    let delta = if want_delta {
        match timer.time("delta", || delta_fan_with_budget(&sigma, budget)) {
            Ok(d) => {
                let mut section = delta_section(&d);
                if let Some(l) = req.options.grid_l {
                    let g = timer.time("grid_check", || grid_check(&d, l))?;
                    report.certification.grid_agrees = Some(g.agree);
                    section.grid_check = Some(g);
                }
                report.delta = Some(section);
                Some(d)
            }
            Err(e) => match skipped(&e) {
                Some(reason) => {
                    report.delta = Some(skipped_delta(reason));
                    None
                }
                None => return Err(e.into()),
            },
        }
    } else {
        None
    };

    for w in &ray_tests {
        let t = timer.time("ray_test", || ray_sufficient_test(&sigma, w))?;
        report.ray_tests.push(RayTestRow {
            w: zvec(w),
            holds: t.holds,
            witness: t.witness.as_ref().map(zvec),
        });
    }

    let mut dim_bounds: BTreeMap<LatticeVector, usize> = BTreeMap::new();
    if !arrow_weights.is_empty() {
        let d2: std::result::Result<Rat, String> = match &delta {
            Some(d) => Ok(d.theta.diameter_sq.clone()),
            None => match timer.time("theta", || theta_with_budget(a.as_ref().expect("dual computed"), budget)) {
                Ok(t) => Ok(t.diameter_sq),
                Err(e) => Err(skipped(&e).ok_or(CliError::Core(e))?),
            },
        };
        for w in &arrow_weights {
            let mut section = ArrowSection {
                w: zvec(w),
                status: "ok".into(),
                reason: None,
                diameter_sq: None,
                tie_breakers: 0,
                dim_bound: None,
                certificates: Vec::new(),
            };
            match &d2 {
                Err(reason) => {
                    section.status = "skipped".into();
                    section.reason = Some(reason.clone());
                }
                Ok(d2) => {
                    let search = timer.time("arrows", || critical_arrows_bounded(&sigma, w, d2, req.options.norm_bound.as_ref()))?;
                    for c in &search.certificates {
                        if verify_certificate(&sigma, c, Some(d2)).is_err() {
                            report.certification.certificates_verified = false;
                        }
                    }
                    section.diameter_sq = Some(Q(d2.clone()));
                    section.tie_breakers = search.tie_breakers.len();
                    section.dim_bound = Some(search.dim_bound);
                    section.certificates = search.certificates.iter().map(CertificateDoc::of).collect();
                    dim_bounds.insert(w.clone(), search.dim_bound);
                }
            }
            report.arrows.push(section);
        }
    }

    if want_divisors {
        let ss = timer.time("minimal_s_sigma", || minimal_s_sigma(&sigma, req.options.height_bound.clone()))?;
        report.certification.s_sigma_certified = Some(ss.certified);
        report.minimal_s_sigma = Some(SSigmaSection {
            elements: ss.elements.iter().map(zvec).collect(),
            certified: ss.certified,
            functional: zvec(&ss.functional),
            height_bound: Z(ss.bound.clone()),
        });
        let mut rays: BTreeSet<LatticeVector> = hb_b.iter().cloned().collect();
        rays.extend(ss.elements.iter().cloned());
        for w in ray_tests.iter().chain(&arrow_weights) {
            rays.insert(primitive_of(w)?);
        }
        let rays: Vec<LatticeVector> = rays.into_iter().collect();
        let records = timer.time("divisors", || classify_divisors_bounded(&sigma, &rays, req.options.height_bound.clone()))?;
        report.divisors = records
            .into_iter()
            .map(|r| DivisorRow {
                in_delta: delta.as_ref().map(|d| d.fan.has_ray(&r.ray_primitive)),
                arrow_dim_bound: dim_bounds.get(&r.ray_primitive).copied(),
                ray: zvec(&r.ray_primitive),
                is_ray_of_sigma: r.is_ray_of_sigma,
                in_hilbert_basis_b: r.in_hilbert_basis_b,
                bgs_essential: r.bgs_essential,
                essential: r.essential,
                sufficient_condition: r.sufficient_condition,
            })
            .collect();
    }

    for c in &req.commands {
        let (kind, spec) = match c {
            Command::Moderate(f) => ("moderate", f),
            Command::Crepant(f) => ("crepant", f),
            _ => continue,
        };
        let row = timer.time("subdivisions", || subdivision_row(kind, spec, &sigma, &hb_b))?;
        report.subdivisions.push(row);
    }

    report.timing_us = timer.0;
    Ok(report)
}

/// Outcome of re-checking a stored report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verified {
    pub certificates: usize,
    pub delta_checked: bool,
}

/// Re-verifies every certificate, each recorded dimension bound and the
/// stored `Δ` against the echoed input.
pub fn verify_report(text: &str) -> CliResult<Verified> {
    let report: Report = serde_json::from_str(text)?;
    let spec = ConeSpec {
        rank: report.input.rank,
        rays: report.input.rays.iter().map(|r| lattice(r)).collect(),
    };
    let sigma = spec.cone()?;
    let mut count = 0;
    for section in &report.arrows {
        if section.status != "ok" {
            continue;
        }
        let w = lattice(&section.w);
        let d2 = section.diameter_sq.as_ref().map(|q| q.0.clone());
        let certs: Vec<CriticalCertificate> = section.certificates.iter().map(CertificateDoc::to_certificate).collect();
        for c in &certs {
            verify_certificate(&sigma, c, d2.as_ref())?;
            count += 1;
        }
        if let Some(b) = section.dim_bound {
            if min_cone_dim_bound(&sigma, &w, &certs)? != b {
                return Err(Error::InvalidCertificate(format!("dimension bound for {w} does not follow from its certificates")).into());
            }
        }
    }
    let mut delta_checked = false;
    if let Some(d) = report.delta.as_ref().filter(|d| d.status == "ok") {
        let fan = d.fan_spec(spec.rank).fan()?;
        check_subdivision(&fan, &sigma).map_err(|e| Error::Invariant(e.to_string()))?;
        delta_checked = true;
    }
    Ok(Verified {
        certificates: count,
        delta_checked,
    })
}

/// The fan to draw: `Δ` when the report has it, otherwise `σ` with its faces.
pub fn fan_for_drawing(report: &Report, sigma: &Cone) -> CliResult<Fan> {
    match report.delta.as_ref().filter(|d| d.status == "ok") {
        Some(d) => Ok(d.fan_spec(sigma.ambient_dim()).fan()?.with_support(sigma.clone())),
        None => Ok(Fan::trivial(sigma)),
    }
}
