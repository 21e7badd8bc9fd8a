//! Exact angular sweep over planar directions.
//!
//! For a direction `w = (cos t, sin t)` and a planar offset `v`, the event
//! `w.v <= 0` holds exactly on the closed half circle of angles centred at
//! `angle(v) + pi`. A count such as `#{i : w.(x_i - z) <= 0}` is therefore a
//! sum of weighted closed half-circle indicators, and it is piecewise constant
//! in `t` with breakpoints at the half-circle endpoints. The sweep sorts those
//! endpoints once and visits every distinct value, including the closed values
//! at the breakpoints themselves, without evaluating any dot product at a
//! breakpoint angle.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, TAU};

use crate::cone::{angle, wrap, DualArc};

/// Breakpoints closer than this (radians) are treated as coincident.
pub const ANGLE_EPS: f64 = 1e-10;

/// A sum `base + sum_k weight_k * 1{t in [c_k - pi/2, c_k + pi/2]}`.
#[derive(Clone, Debug, Default)]
pub struct ArcField {
    base: f64,
    arcs: Vec<(f64, f64)>,
}

impl ArcField {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `weight * 1{w.v >= 0}`; a zero `v` always counts.
    pub fn add_nonneg(&mut self, v: &[f64], weight: f64) {
        if v[0] == 0.0 && v[1] == 0.0 {
            self.base += weight;
        } else {
            self.arcs.push((angle(v), weight));
        }
    }

    /// Adds `weight * 1{w.v <= 0}`; a zero `v` always counts.
    pub fn add_nonpos(&mut self, v: &[f64], weight: f64) {
        self.add_nonneg(&[-v[0], -v[1]], weight);
    }
}

/// The directions swept: an arc of the circle or all of it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Domain {
    Sector { start: f64, width: f64 },
    Full,
}

impl Domain {
    /// `None` for finitely many isolated rays, which need no sweep.
    pub fn from_arc(arc: &DualArc) -> Option<Domain> {
        match *arc {
            DualArc::Rays(_) => None,
            DualArc::Sector { start, width } => Some(Domain::Sector { start, width }),
            DualArc::Full => Some(Domain::Full),
        }
    }
}

struct Event {
    t: f64,
    field: usize,
    enter: bool,
    weight: f64,
}

/// Visits every distinct joint value of `fields` over the domain.
///
/// `visit(theta, values)` receives an angle at which the values are attained
/// and the value of each field there. The visits cover every closed
/// breakpoint and every open interval between breakpoints, so the minimum of
/// any function of the values over the visits equals its infimum over the
/// domain.
pub fn sweep(fields: &[ArcField], domain: Domain, mut visit: impl FnMut(f64, &[f64])) {
    let (start, width) = match domain {
        Domain::Sector { start, width } => (start, width),
        Domain::Full => (0.0, TAU),
    };
    let full = matches!(domain, Domain::Full);
    let rel = |theta: f64| {
        let t = wrap(theta - start);
        if t > TAU - ANGLE_EPS {
            0.0
        } else {
            t
        }
    };

    let mut current: Vec<f64> = fields.iter().map(|f| f.base).collect();
    let mut events: Vec<Event> = Vec::new();
    for (k, f) in fields.iter().enumerate() {
        for &(c, weight) in &f.arcs {
            let enter = rel(c - FRAC_PI_2);
            let leave = rel(c + FRAC_PI_2);
            // the arc covers the instant just before t = 0 iff it wraps
            if enter > leave {
                current[k] += weight;
            }
            events.push(Event {
                t: enter,
                field: k,
                enter: true,
                weight,
            });
            events.push(Event {
                t: leave,
                field: k,
                enter: false,
                weight,
            });
        }
    }
    events.sort_by(|a, b| a.t.total_cmp(&b.t));

    let limit = if full { TAU - ANGLE_EPS } else { width + ANGLE_EPS };
    let mut closed = current.clone();
    let mut i = 0;
    if events.first().is_none_or(|e| e.t > ANGLE_EPS) {
        visit(start, &current);
    }
    while i < events.len() && events[i].t <= limit {
        let t0 = events[i].t;
        let mut j = i;
        while j < events.len() && events[j].t - t0 <= ANGLE_EPS {
            j += 1;
        }
        closed.copy_from_slice(&current);
        for e in &events[i..j] {
            if e.enter {
                closed[e.field] += e.weight;
            }
        }
        let t_mid = events[j - 1].t;
        visit(start + 0.5 * (t0 + t_mid), &closed);
        current.copy_from_slice(&closed);
        for e in &events[i..j] {
            if !e.enter {
                current[e.field] -= e.weight;
            }
        }
        let next = if j < events.len() { events[j].t } else if full { TAU } else { width };
        let end = if full { next } else { next.min(width) };
        if end - t_mid > ANGLE_EPS {
            visit(start + 0.5 * (t_mid + end), &current);
        }
        i = j;
    }
}

/// Convenience: the minimum of a single field and an angle attaining it.
pub fn min_single(field: &ArcField, domain: Domain) -> (f64, f64) {
    let mut best = (f64::INFINITY, 0.0);
    sweep(core::slice::from_ref(field), domain, |theta, v| {
        if v[0] < best.0 {
            best = (v[0], theta);
        }
    });
    best
}
