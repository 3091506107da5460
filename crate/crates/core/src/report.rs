//! End-to-end verification of one member of the family, and sweeps over a
//! range of `k`.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{
    canonical_ddg_partition, cayley_graph, ddg_check, deza_parameters, grid_graph, DdgParameters, DezaParameters, Graph,
};
use crate::group::{Elem, Group};
use crate::groupring::{connection_set, verify_family_square, SquareIdentityReport};
use crate::spectrum::{expected_family_spectrum, integral_spectrum, IntegralSpectrum, TraceChecks};
use crate::sring::{
    closure_trace_for, detect_wreath, is_sring, wl_closure, ClosureTrace, SRingPartition, WreathSummary,
};
use crate::wl::{wl1_distinguishes, wl2};

pub const SCHEMA_VERSION: u32 = 1;

/// `G`, `S` and `Cay(G, S)` for one `k`.
pub struct FamilyMember {
    pub k: usize,
    pub group: Group,
    pub connection_set: BTreeSet<Elem>,
    pub graph: Graph,
}

impl FamilyMember {
    pub fn new(k: usize) -> Result<FamilyMember> {
        let group = Group::dihedral_klein(k)?;
        let connection_set = connection_set(&group, k)?;
        let graph = cayley_graph(&group, &connection_set)?;
        Ok(FamilyMember { k, group, connection_set, graph })
    }

    pub fn n(&self) -> usize {
        self.group.order()
    }

    /// `8k` for odd `k`, `4k + 4` for even `k`.
    pub fn expected_wl_rank(&self) -> usize {
        expected_wl_rank(self.k)
    }

    pub fn deza_tuple(&self) -> (usize, usize, usize, usize) {
        let k = self.k;
        (8 * k, 2 * (k + 1), 2 * (k - 1), 2)
    }

    pub fn ddg_tuple(&self) -> (usize, usize, Option<usize>, Option<usize>, usize, usize) {
        let k = self.k;
        (8 * k, 2 * (k + 1), Some(2 * (k - 1)), Some(2), 4, 2 * k)
    }
}

pub fn expected_wl_rank(k: usize) -> usize {
    if k % 2 == 1 {
        8 * k
    } else {
        4 * k + 4
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Edges removed from the graph before the graph-side checks; a
    /// negative control for the pipeline.
    pub remove_edges: Vec<(usize, usize)>,
    pub include_timings: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub pairs: Vec<(i64, usize)>,
    pub expected_eigenvalues: Vec<i64>,
    pub trace_checks: TraceChecks,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridComparison {
    pub grid_parameters: Option<DezaParameters>,
    pub same_parameters: bool,
    pub grid_wl_rank: usize,
    pub wl1_distinguishes: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub closure_ms: f64,
    pub wl2_ms: f64,
    pub spectrum_ms: f64,
    pub total_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub k: usize,
    pub group_order: usize,
    pub connection_set: Vec<String>,
    pub square_identity: SquareIdentityReport,
    pub deza: Option<DezaParameters>,
    pub deza_error: Option<String>,
    pub wl_rank_graph: usize,
    pub wl_rank_sring: usize,
    pub expected_wl_rank: usize,
    pub closure_is_sring: bool,
    pub wreath: Option<WreathSummary>,
    pub wreath_decompositions: usize,
    pub closure_trace: ClosureTrace,
    pub ddg: Option<DdgParameters>,
    pub ddg_error: Option<String>,
    pub spectrum: Option<SpectrumSummary>,
    pub spectrum_error: Option<String>,
    pub grid_comparison: GridComparison,
    pub claims: Vec<Claim>,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timings: Option<Timings>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    pub fn failed_claims(&self) -> Vec<&str> {
        self.claims.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Human-readable summary, one line per claim.
    pub fn summary(&self) -> String {
        let mut out = format!("k = {}  n = {}  |S| = {}\n", self.k, self.group_order, self.connection_set.len());
        for c in &self.claims {
            out.push_str(&format!("  [{}] {:<16} {}\n", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail));
        }
        out.push_str(&format!("verdict: {}\n", self.verdict));
        out
    }
}

fn ms(d: Duration) -> f64 {
    (d.as_secs_f64() * 1e6).round() / 1e3
}

/// Runs every check for `k` and collects one verdict per claim.
pub fn verify(k: usize, opts: &VerifyOptions) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut member = FamilyMember::new(k)?;
    for &(u, v) in &opts.remove_edges {
        if !member.graph.remove_edge(u, v)? {
            return Err(Error::InvalidInput(format!("no edge {u} {v} to remove")));
        }
    }
    let g = &member.group;
    let gamma = &member.graph;
    let mut claims = Vec::new();

    let square_identity = verify_family_square(g, k)?;
    claims.push(Claim {
        name: "square_identity".into(),
        pass: square_identity.holds,
        detail: match &square_identity.first_discrepancy {
            None => "S^2 = 2(k+1)e + 2(k-1)(A# + cbA) + 2(b+c)A + 2dCH".into(),
            Some(d) => format!("coefficient of {} is {}, expected {}", d.element, d.lhs, d.rhs),
        },
    });

    let (deza, deza_error) = match deza_parameters(gamma) {
        Ok(p) => (Some(p), None),
        Err(e) => (None, Some(e.to_string())),
    };
    claims.push(Claim {
        name: "deza".into(),
        pass: deza.as_ref().is_some_and(|p| p.tuple() == member.deza_tuple() && p.strictly),
        detail: match (&deza, &deza_error) {
            (Some(p), _) => format!(
                "(n,k,beta,alpha) = {:?}, strictly = {}, expected {:?}",
                p.tuple(),
                p.strictly,
                member.deza_tuple()
            ),
            (None, Some(e)) => e.clone(),
            _ => unreachable!(),
        },
    });

    let t = Instant::now();
    let closure = wl_closure(g, std::slice::from_ref(&member.connection_set));
    let closure_ms = ms(t.elapsed());
    let closure_is_sring = is_sring(g, &closure).is_ok();

    let t = Instant::now();
    let cc = wl2(gamma)?;
    let wl2_ms = ms(t.elapsed());
    let expected = member.expected_wl_rank();
    claims.push(Claim {
        name: "wl_rank".into(),
        pass: closure_is_sring && cc.rank == expected && closure.rank() == expected,
        detail: format!("2-WL {}, S-ring closure {}, expected {}", cc.rank, closure.rank(), expected),
    });

    let decompositions = detect_wreath(g, &closure)?;
    let wreath = wreath_claim(&member, &closure, &decompositions);
    claims.push(wreath.0);

    let trace = closure_trace_for(g, k, &closure)?;
    claims.push(Claim {
        name: "closure_trace".into(),
        pass: trace.all_hold(),
        detail: format!(
            "{}/{} assertions hold",
            trace.assertions.iter().filter(|a| a.holds).count(),
            trace.assertions.len()
        ),
    });

    let partition = canonical_ddg_partition(g, k)?;
    let (ddg, ddg_error) = match ddg_check(gamma, &partition) {
        Ok(p) => (Some(p), None),
        Err(e) => (None, Some(e.to_string())),
    };
    claims.push(Claim {
        name: "ddg".into(),
        pass: ddg.as_ref().is_some_and(|p| p.tuple() == member.ddg_tuple()),
        detail: match (&ddg, &ddg_error) {
            (Some(p), _) => format!("{:?}, expected {:?}", p.tuple(), member.ddg_tuple()),
            (None, Some(e)) => e.clone(),
            _ => unreachable!(),
        },
    });

    let t = Instant::now();
    let expected_set = expected_family_spectrum(k)?;
    let (spectrum, spectrum_error) = match integral_spectrum(gamma)? {
        Ok(s) => (Some(spectrum_summary(&s, gamma, &expected_set)), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let spectrum_ms = ms(t.elapsed());
    claims.push(Claim {
        name: "spectrum".into(),
        pass: spectrum.as_ref().is_some_and(|s| {
            s.trace_checks.all() && s.pairs.iter().map(|p| p.0).collect::<BTreeSet<_>>() == expected_set
        }),
        detail: match (&spectrum, &spectrum_error) {
            (Some(s), _) => format!("{:?}", s.pairs),
            (None, Some(e)) => e.clone(),
            _ => unreachable!(),
        },
    });

    let grid = grid_graph(4, 2 * k)?;
    let grid_parameters = deza_parameters(&grid).ok();
    let grid_wl_rank = wl2(&grid)?.rank;
    let same_parameters = match (&grid_parameters, &deza) {
        (Some(a), Some(b)) => a.tuple() == b.tuple(),
        _ => false,
    };
    let distinguishes = wl1_distinguishes(gamma, &grid);
    let grid_comparison =
        GridComparison { grid_parameters, same_parameters, grid_wl_rank, wl1_distinguishes: distinguishes };
    claims.push(Claim {
        name: "grid".into(),
        pass: same_parameters && grid_wl_rank == 4 && grid_wl_rank != cc.rank && !distinguishes,
        detail: format!(
            "same parameters {}, grid WL-rank {} vs {}, 1-WL distinguishes {}",
            same_parameters, grid_wl_rank, cc.rank, distinguishes
        ),
    });

    let passed = claims.iter().all(|c| c.pass);
    let timings =
        opts.include_timings.then(|| Timings { closure_ms, wl2_ms, spectrum_ms, total_ms: ms(start.elapsed()) });
    Ok(VerificationReport {
        schema_version: SCHEMA_VERSION,
        k,
        group_order: g.order(),
        connection_set: member.connection_set.iter().map(|&x| g.name(x).to_string()).collect(),
        square_identity,
        deza,
        deza_error,
        wl_rank_graph: cc.rank,
        wl_rank_sring: closure.rank(),
        expected_wl_rank: expected,
        closure_is_sring,
        wreath: wreath.1,
        wreath_decompositions: decompositions.len(),
        closure_trace: trace,
        ddg,
        ddg_error,
        spectrum,
        spectrum_error,
        grid_comparison,
        claims,
        verdict: if passed { "pass" } else { "fail" }.into(),
        timings,
    })
}

fn spectrum_summary(s: &IntegralSpectrum, g: &Graph, expected: &BTreeSet<i64>) -> SpectrumSummary {
    SpectrumSummary {
        pairs: s.pairs.clone(),
        expected_eigenvalues: expected.iter().rev().copied().collect(),
        trace_checks: s.trace_checks(g),
    }
}

/// Odd `k`: the closure is the whole group ring and has no nontrivial
/// wreath decomposition. Even `k`: some decomposition has `|L| = k`,
/// `|U| = 4k` and ranks 8 and 4 on `G/L` and `U/L`.
fn wreath_claim(
    member: &FamilyMember,
    closure: &SRingPartition,
    found: &[crate::sring::WreathDecomposition],
) -> (Claim, Option<WreathSummary>) {
    let g = &member.group;
    let k = member.k;
    let identities = found.iter().all(|w| w.rank_identity_holds());
    if k % 2 == 1 {
        let is_group_ring = closure.rank() == g.order();
        let claim = Claim {
            name: "wreath".into(),
            pass: is_group_ring && found.is_empty(),
            detail: format!("closure is ZG: {}, nontrivial decompositions: {}", is_group_ring, found.len()),
        };
        (claim, None)
    } else {
        let hit = found.iter().find(|w| {
            w.section.lower().order() == k
                && w.section.upper().order() == 4 * k
                && w.rank_quotient == 8
                && w.rank_section == 4
                && w.rank_identity_holds()
        });
        let summary = hit.or(found.first()).map(|w| w.summary(g));
        let claim = Claim {
            name: "wreath".into(),
            pass: hit.is_some() && identities,
            detail: match &summary {
                Some(s) => format!(
                    "|L| = {}, |U| = {}, rk = {} + {} - {} = {}",
                    s.l_order, s.u_order, s.rank_u, s.rank_quotient, s.rank_section, s.rank_total
                ),
                None => "no decomposition found".into(),
            },
        };
        (claim, summary)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub k: usize,
    pub n: usize,
    pub s_size: usize,
    pub deza_n: Option<usize>,
    pub deza_k: Option<usize>,
    pub deza_beta: Option<usize>,
    pub deza_alpha: Option<usize>,
    pub strictly: Option<bool>,
    pub wl_rank_graph: usize,
    pub wl_rank_sring: usize,
    pub expected_wl_rank: usize,
    /// Eigenvalues, decreasing, `;`-separated.
    pub spectrum: String,
    /// `n;k;alpha;beta;m;l`.
    pub ddg: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total_ms: Option<f64>,
}

impl SweepRow {
    pub fn from_report(r: &VerificationReport) -> SweepRow {
        let join = |v: Vec<String>| v.join(";");
        let opt = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
        SweepRow {
            k: r.k,
            n: r.group_order,
            s_size: r.connection_set.len(),
            deza_n: r.deza.as_ref().map(|d| d.n),
            deza_k: r.deza.as_ref().map(|d| d.k),
            deza_beta: r.deza.as_ref().map(|d| d.beta),
            deza_alpha: r.deza.as_ref().map(|d| d.alpha),
            strictly: r.deza.as_ref().map(|d| d.strictly),
            wl_rank_graph: r.wl_rank_graph,
            wl_rank_sring: r.wl_rank_sring,
            expected_wl_rank: r.expected_wl_rank,
            spectrum: r
                .spectrum
                .as_ref()
                .map_or(String::new(), |s| join(s.pairs.iter().map(|p| p.0.to_string()).collect())),
            ddg: r.ddg.as_ref().map_or(String::new(), |d| {
                join(vec![
                    d.n.to_string(),
                    d.k.to_string(),
                    opt(d.alpha),
                    opt(d.beta),
                    d.m.to_string(),
                    d.l.to_string(),
                ])
            }),
            pass: r.passed(),
            total_ms: r.timings.as_ref().map(|t| t.total_ms),
        }
    }
}

/// One row per `k` in `from..=to`, computed in parallel, in order of `k`.
pub fn sweep(from: usize, to: usize, include_timings: bool) -> Result<Vec<SweepRow>> {
    use rayon::prelude::*;
    if from > to {
        return Err(Error::InvalidParameter(format!("empty range {from}..={to}")));
    }
    if from < 3 {
        return Err(Error::InvalidParameter(format!("k must be at least 3, got {from}")));
    }
    let opts = VerifyOptions { include_timings, ..Default::default() };
    (from..=to).into_par_iter().map(|k| verify(k, &opts).map(|r| SweepRow::from_report(&r))).collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| Error::Internal(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
}
