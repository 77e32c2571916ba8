use std::path::Path;

use super::config::{linspace, Command, RunConfig};
use super::output::{svg_chart, Cell, Series, Table};
use super::{parse_potential, Outcome};
use crate::error::{Error, Result};
use crate::optical::{
    double_barrier_time, map_quantum_waveguide, traversal_time_direct, traversal_time_mapped, waveguide_dispersion,
    WaveguideSpec, DEFAULT_MARGIN,
};
use crate::packet::{SpectralPacket, DEFAULT_NODES};
use crate::potential::PiecewisePotential;
use crate::scattering::SquareBarrierParams;
use crate::times::{reshaping_check, reshaping_table, time_report};
use crate::units::UnitSystem;
use crate::wavepacket::{
    bohm_trajectories, bohm_transmission_time, flux_records, mean_times, penetration_profile, quantile_seeds,
    BohmConfig, PacketField, SeedStrata, TimeGridSpec, FLUX_FLOOR,
};

const U: UnitSystem = UnitSystem::ELECTRON;

pub(super) fn dispatch(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let mut w = Writer { cfg, out, outcome: Outcome::default(), svg: cfg.bool_or("svg", true)? };
    match cfg.command {
        Command::Times => times(&mut w)?,
        Command::Evolve => evolve(&mut w)?,
        Command::Hartman => hartman(&mut w)?,
        Command::Reshape => reshape(&mut w)?,
        Command::Optical => optical(&mut w)?,
        Command::Bohm => bohm(&mut w)?,
    }
    Ok(w.outcome)
}

struct Writer<'a> {
    cfg: &'a RunConfig,
    out: &'a Path,
    outcome: Outcome,
    svg: bool,
}

impl Writer<'_> {
    fn table(&mut self, t: &Table) -> Result<()> {
        let p = t.write(self.out, self.cfg, &U)?;
        self.outcome.files.push(p);
        Ok(())
    }

    fn chart(&mut self, name: &str, title: &str, xl: &str, yl: &str, series: &[Series]) -> Result<()> {
        if !self.svg {
            return Ok(());
        }
        let p = self.out.join(format!("{name}.svg"));
        std::fs::write(&p, svg_chart(title, xl, yl, series))?;
        self.outcome.files.push(p);
        Ok(())
    }

    fn warn(&mut self, msg: String) {
        self.outcome.warnings.push(msg);
    }
}

fn grid_spec(cfg: &RunConfig) -> Result<TimeGridSpec> {
    let d = TimeGridSpec::default();
    let spec = TimeGridSpec {
        fine_dt: cfg.positive_or("fine_dt", d.fine_dt)?,
        coarse_dt: cfg.positive_or("coarse_dt", d.coarse_dt)?,
        t_min: cfg.f64_or("t_min", d.t_min)?,
        t_max: cfg.f64_or("t_max", d.t_max)?,
        ..d
    };
    if spec.t_max <= spec.t_min {
        return Err(Error::Config("t_max must exceed t_min".into()));
    }
    if spec.fine_dt > spec.coarse_dt {
        return Err(Error::Config("fine_dt must not exceed coarse_dt".into()));
    }
    Ok(spec)
}

fn nodes(cfg: &RunConfig) -> Result<usize> {
    let n = cfg.usize_or("nodes", DEFAULT_NODES)?;
    if n < 2 {
        return Err(Error::Config("`nodes` must be at least 2".into()));
    }
    Ok(n)
}

fn note_numerics(t: &mut Table, n: usize, spec: Option<&TimeGridSpec>) {
    t.note("quadrature_nodes", n);
    if let Some(s) = spec {
        t.note("flux_floor", format!("{FLUX_FLOOR:e}"));
        t.note("support_threshold", format!("{:e}", s.rel_threshold));
        t.note("support_pad_steps", s.pad_steps);
        t.note("window_expansions", s.max_expansions);
    }
}

/// Energies from `e` (list) or `e_min`, `e_max`, `e_steps`.
fn energies(cfg: &RunConfig) -> Result<Vec<f64>> {
    if cfg.is_set("e") {
        if cfg.is_set("e_min") || cfg.is_set("e_max") || cfg.is_set("e_steps") {
            return Err(Error::Config("give either `e` or the e_min/e_max/e_steps range".into()));
        }
        return cfg.list_or("e", &[5.0]);
    }
    if cfg.is_set("e_min") || cfg.is_set("e_max") || cfg.is_set("e_steps") {
        let lo = cfg.positive_or("e_min", 1.0)?;
        let hi = cfg.positive_or("e_max", 10.0)?;
        return linspace(lo, hi, cfg.usize_or("e_steps", 10)?);
    }
    cfg.list_or("e", &[5.0])
}

fn times(w: &mut Writer) -> Result<()> {
    let cfg = w.cfg;
    let v0 = cfg.positive_or("v0", 10.0)?;
    let ds = cfg.list_or("d", &[5.0])?;
    let es = energies(cfg)?;
    let mut t = Table::new(
        "times",
        &[
            "d_A",
            "k",
            "E_eV",
            "T",
            "R",
            "alpha",
            "beta",
            "tau_eq_s",
            "dtau_phase_T_s",
            "dtau_phase_R_s",
            "tau_dwell_s",
            "tau_larmor_y_s",
            "tau_larmor_z_s",
            "tau_larmor_x_s",
            "tau_BL_T_s",
            "tau_BL_R_s",
            "tau_complex_re_s",
            "tau_complex_im_s",
        ],
    );
    let mut series = Vec::new();
    for &d in &ds {
        let params = SquareBarrierParams::new(v0, d).map_err(|e| Error::Config(e.to_string()))?;
        let mut pts = Vec::new();
        for &e in &es {
            let r = time_report(&params, U.k_of_e(e), &U)?;
            let row: Vec<Cell> = vec![
                d.into(),
                r.k.into(),
                r.e.into(),
                r.t.into(),
                r.r.into(),
                r.alpha.into(),
                r.beta.into(),
                r.tau_eq.into(),
                r.dtau_phase_t.into(),
                r.dtau_phase_r.into(),
                r.tau_dwell.into(),
                r.tau_larmor_y.into(),
                r.tau_larmor_z.into(),
                r.tau_larmor_x.into(),
                r.tau_bl_t.into(),
                r.tau_bl_r.into(),
                r.tau_complex.re.into(),
                r.tau_complex.im.into(),
            ];
            if row.iter().any(|c| matches!(c, Cell::Num(v) if !v.is_finite())) {
                w.warn(format!("non-finite entry at d = {d}, E = {e}"));
            }
            t.push(row);
            pts.push((e, r.dtau_phase_t));
        }
        series.push(Series { label: format!("d = {d} A"), points: pts });
    }
    w.table(&t)?;
    if es.len() > 1 {
        w.chart("times", "Phase time", "E (eV)", "dtau_phase_T (s)", &series)?;
    }
    Ok(())
}

struct Curve {
    e: f64,
    dk: f64,
    d: f64,
}

fn curves(cfg: &RunConfig) -> Result<Vec<Curve>> {
    if let Some(spec) = cfg.str_opt("curves") {
        if cfg.is_set("e") || cfg.is_set("dk") || cfg.is_set("d") {
            return Err(Error::Config("`curves` replaces the e, dk and d lists".into()));
        }
        return spec
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                let parts: Vec<&str> = s.split('/').map(str::trim).collect();
                let bad = || Error::Config(format!("curve `{s}`: expected E/dk/d"));
                if parts.len() != 3 {
                    return Err(bad());
                }
                let v: Vec<f64> = parts.iter().map(|p| p.parse::<f64>().map_err(|_| bad())).collect::<Result<_>>()?;
                if v.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
                    return Err(Error::Config(format!("curve `{s}`: values must be positive")));
                }
                Ok(Curve { e: v[0], dk: v[1], d: v[2] })
            })
            .collect();
    }
    let es = cfg.list_or("e", &[5.0])?;
    let dks = cfg.list_or("dk", &[0.02])?;
    let ds = cfg.list_or("d", &[5.0])?;
    let mut out = Vec::new();
    for &d in &ds {
        for &dk in &dks {
            for &e in &es {
                out.push(Curve { e, dk, d });
            }
        }
    }
    Ok(out)
}

fn load_potential(cfg: &RunConfig) -> Result<Option<PiecewisePotential>> {
    match cfg.str_opt("potential") {
        None => Ok(None),
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Config(format!("cannot read potential file `{path}`: {e}")))?;
            parse_potential(&text).map(Some)
        }
    }
}

fn evolve(w: &mut Writer) -> Result<()> {
    let cfg = w.cfg;
    let v0 = cfg.positive_or("v0", 10.0)?;
    let custom = load_potential(cfg)?;
    if custom.is_some() && (cfg.is_set("d") || cfg.is_set("v0")) {
        return Err(Error::Config("`potential` replaces v0 and d".into()));
    }
    let list = curves(cfg)?;
    let nx = cfg.usize_or("x_points", 21)?;
    if nx < 20 {
        return Err(Error::Config("`x_points` must be at least 20".into()));
    }
    let n = nodes(cfg)?;
    let spec = grid_spec(cfg)?;
    let mut t = Table::new(
        "evolve",
        &[
            "curve",
            "E_eV",
            "dk",
            "d_A",
            "x_A",
            "x_over_d",
            "tau_pen_s",
            "tau_ret_s",
            "plus_low_confidence",
            "minus_low_confidence",
        ],
    );
    note_numerics(&mut t, n, Some(&spec));
    let (mut pen, mut ret) = (Vec::new(), Vec::new());
    for (i, c) in list.iter().enumerate() {
        let pot = match &custom {
            Some(p) => p.clone(),
            None => PiecewisePotential::square(v0, c.d)?,
        };
        let (a, b) = (pot.x_left(), pot.x_right());
        let width = b - a;
        let xs = linspace(a, b, nx)?;
        let field = PacketField::new(SpectralPacket::with_nodes(U.k_of_e(c.e), c.dk, n)?, pot, U)?;
        let prof = penetration_profile(&field, a, &xs, &spec)?;
        let label = format!("E={} dk={} d={}", c.e, c.dk, width);
        let (mut pp, mut rp) = (Vec::new(), Vec::new());
        for p in &prof {
            if p.plus_low_confidence || p.minus_low_confidence {
                w.warn(format!("curve {i}: low-confidence flux at x = {}", p.x));
            }
            t.push(vec![
                i.into(),
                c.e.into(),
                c.dk.into(),
                width.into(),
                p.x.into(),
                ((p.x - a) / width).into(),
                p.tau_pen.into(),
                p.tau_ret.into(),
                p.plus_low_confidence.into(),
                p.minus_low_confidence.into(),
            ]);
            pp.push((p.x - a, p.tau_pen));
            rp.push((p.x - a, p.tau_ret));
        }
        pen.push(Series { label: label.clone(), points: pp });
        ret.push(Series { label, points: rp });
    }
    w.table(&t)?;
    w.chart("evolve_pen", "Penetration time from the left edge", "x (A)", "tau_pen (s)", &pen)?;
    w.chart("evolve_ret", "Return time", "x (A)", "tau_ret (s)", &ret)?;
    Ok(())
}

fn hartman(w: &mut Writer) -> Result<()> {
    let cfg = w.cfg;
    let v0 = cfg.positive_or("v0", 10.0)?;
    let e = cfg.positive_or("e", 5.0)?;
    if e >= v0 {
        return Err(Error::Config("hartman sweep needs e < v0".into()));
    }
    let ds = if cfg.is_set("d") {
        if cfg.is_set("d_min") || cfg.is_set("d_max") || cfg.is_set("d_steps") {
            return Err(Error::Config("give either `d` or the d_min/d_max/d_steps range".into()));
        }
        cfg.list_or("d", &[5.0])?
    } else if cfg.is_set("d_min") || cfg.is_set("d_max") || cfg.is_set("d_steps") {
        let lo = cfg.positive_or("d_min", 1.0)?;
        let hi = cfg.positive_or("d_max", 20.0)?;
        linspace(lo, hi, cfg.usize_or("d_steps", 20)?)?
    } else {
        cfg.list_or("d", &[5.0, 10.0, 15.0, 20.0])?
    };
    let with_flux = cfg.bool_or("flux", true)?;
    let dk = cfg.positive_or("dk", 0.02)?;
    let (n, spec) = if with_flux { (nodes(cfg)?, Some(grid_spec(cfg)?)) } else { (DEFAULT_NODES, None) };
    let k = U.k_of_e(e);
    let mut t = Table::new(
        "hartman",
        &[
            "d_A",
            "kappa_d",
            "dtau_phase_T_s",
            "tau_dwell_s",
            "tau_BL_T_s",
            "tau_saturation_s",
            "tau_tun_flux_s",
            "flux_low_confidence",
        ],
    );
    if with_flux {
        note_numerics(&mut t, n, spec.as_ref());
        t.note("packet_dk", format!("{dk:e}"));
    }
    let (mut ph, mut bl, mut fl) = (Vec::new(), Vec::new(), Vec::new());
    for &d in &ds {
        let params = SquareBarrierParams::new(v0, d)?;
        let kappa = params.kappa2(k, &U).sqrt();
        let r = time_report(&params, k, &U)?;
        let sat = 2.0 / (U.hbar_over_m() * k * kappa);
        let (tun, low) = match &spec {
            Some(s) => {
                let field = PacketField::new(SpectralPacket::with_nodes(k, dk, n)?, params.potential(), U)?;
                let recs = flux_records(&field, &[0.0, d], s);
                let m = mean_times(&recs[0], &recs[1])?;
                if m.low_confidence {
                    w.warn(format!("low-confidence flux time at d = {d}"));
                }
                (m.tau_t, m.low_confidence)
            }
            None => (f64::NAN, false),
        };
        t.push(vec![
            d.into(),
            (kappa * d).into(),
            r.dtau_phase_t.into(),
            r.tau_dwell.into(),
            r.tau_bl_t.into(),
            sat.into(),
            tun.into(),
            low.into(),
        ]);
        ph.push((d, r.dtau_phase_t));
        bl.push((d, r.tau_bl_t));
        fl.push((d, tun));
    }
    w.table(&t)?;
    let mut s = vec![
        Series { label: "phase".into(), points: ph },
        Series { label: "Buttiker-Landauer".into(), points: bl },
    ];
    if with_flux {
        s.push(Series { label: "flux".into(), points: fl });
    }
    w.chart("hartman", "Times against barrier width", "d (A)", "time (s)", &s)?;
    Ok(())
}

fn reshape(w: &mut Writer) -> Result<()> {
    let cfg = w.cfg;
    let v0 = cfg.positive_or("v0", 10.0)?;
    let ratios = cfg.list_or("k0_over_eps", &[0.3, 0.5, 0.7, 0.9])?;
    let des = cfg.list_or("d_eps", &[1.0, 3.0, 6.0, 10.0, 15.0, 20.0, 25.0])?;
    let dk_rel = cfg.positive_or("dk_rel", 0.1)?;
    let npts = cfg.usize_or("curve_points", 201)?;
    if npts < 3 {
        return Err(Error::Config("`curve_points` must be at least 3".into()));
    }
    let eps = SquareBarrierParams::new(v0, 1.0)?.eps(&U);
    let mut summary = Table::new(
        "reshape_summary",
        &[
            "k0_over_eps",
            "d_eps",
            "k0",
            "dk",
            "d_A",
            "peak_k",
            "peak_shift",
            "peak_shift_refined",
            "upper_weight_fraction",
            "violation_count",
            "violation_lo",
            "violation_hi",
        ],
    );
    let mut curves = Table::new("reshape_curves", &["k0_over_eps", "d_eps", "k", "T", "f", "product"]);
    for &ratio in &ratios {
        let mut series = Vec::new();
        for &de in &des {
            let params = SquareBarrierParams::new(v0, de / eps)?;
            let k0 = ratio * eps;
            let dk = dk_rel * k0;
            let rep = reshaping_check(&params, k0, dk, &U)?;
            if (rep.peak_shift - rep.peak_shift_refined).abs() > 1e-3 * dk {
                w.warn(format!("argmax unstable under refinement at k0/eps = {ratio}, d*eps = {de}"));
            }
            let (lo, hi) = rep.violations.first().copied().unwrap_or((f64::NAN, f64::NAN));
            summary.push(vec![
                ratio.into(),
                de.into(),
                k0.into(),
                dk.into(),
                params.d.into(),
                rep.peak_k.into(),
                rep.peak_shift.into(),
                rep.peak_shift_refined.into(),
                rep.upper_weight_fraction.into(),
                rep.violations.len().into(),
                lo.into(),
                hi.into(),
            ]);
            let rows = reshaping_table(&params, k0, dk, npts, &U)?;
            let peak = rows.iter().map(|r| r.product).fold(0.0, f64::max);
            for r in &rows {
                curves.push(vec![ratio.into(), de.into(), r.k.into(), r.t.into(), r.f.into(), r.product.into()]);
            }
            let scale = if peak > 0.0 { 1.0 / peak } else { 1.0 };
            series.push(Series {
                label: format!("d*eps = {de}"),
                points: rows.iter().map(|r| ((r.k - k0) / dk, r.product * scale)).collect(),
            });
        }
        w.chart(
            &format!("reshape_{}", ratio.to_string().replace('.', "p")),
            &format!("T(k) f(k - k0), k0 = {ratio} eps"),
            "(k - k0) / dk",
            "normalised product",
            &series,
        )?;
    }
    w.table(&summary)?;
    w.table(&curves)?;
    Ok(())
}

fn optical(w: &mut Writer) -> Result<()> {
    let cfg = w.cfg;
    let b = cfg.positive_or("b", 0.02)?;
    let lo = cfg.positive_or("ratio_min", 0.5)?;
    let hi = cfg.positive_or("ratio_max", 1.5)?;
    let ratios = linspace(lo, hi, cfg.usize_or("ratio_steps", 20)?)?;
    let length = cfg.positive_or("length", 0.05)?;
    let mut disp = Table::new(
        "optical_dispersion",
        &[
            "omega_over_omega_c",
            "omega_rad_s",
            "kappa_re_per_m",
            "kappa_im_per_m",
            "v_group_m_s",
            "evanescent",
            "mapped_v0",
            "mapped_k_per_m",
            "tau_mapped_s",
            "tau_direct_s",
            "relative_difference",
        ],
    );
    disp.note("guide_width_m", format!("{b:e}"));
    disp.note("segment_length_m", format!("{length:e}"));
    let mut pts = Vec::new();
    for &r in &ratios {
        let spec = WaveguideSpec::at_ratio(b, r)?;
        let dsp = waveguide_dispersion(&spec);
        let m = map_quantum_waveguide(&spec, length)?;
        let tm = traversal_time_mapped(&spec, length)?;
        let td = traversal_time_direct(&spec, length).unwrap_or(f64::NAN);
        let rel = ((tm - td) / tm).abs();
        if !(rel <= 1e-10) {
            w.warn(format!("mapped and direct times differ by {rel:e} at omega/omega_c = {r}"));
        }
        disp.push(vec![
            r.into(),
            spec.omega.into(),
            dsp.kappa.re.into(),
            dsp.kappa.im.into(),
            dsp.v_group.unwrap_or(f64::NAN).into(),
            spec.is_evanescent().into(),
            m.params.v0.into(),
            m.k.into(),
            tm.into(),
            td.into(),
            rel.into(),
        ]);
        pts.push((r, tm));
    }
    w.table(&disp)?;
    w.chart(
        "optical_dispersion",
        "Traversal time of a waveguide segment",
        "omega / omega_c",
        "tau (s)",
        &[Series { label: "phase time".into(), points: pts }],
    )?;

    let v0 = cfg.positive_or("v0", 10.0)?;
    let e = cfg.positive_or("e", 5.0)?;
    if e >= v0 {
        return Err(Error::Config("gap sweep needs e < v0".into()));
    }
    let kd = cfg.positive_or("kappa_d", 15.0)?;
    let gaps = cfg.list_or("gaps", &[1.0, 2.0, 3.0, 5.5, 8.0, 11.0])?;
    let margin = cfg.positive_or("margin", DEFAULT_MARGIN)?;
    let k = U.k_of_e(e);
    let kappa = (v0 / U.hbar2_2m() - k * k).sqrt();
    let d = kd / kappa;
    let mut gt = Table::new(
        "optical_gaps",
        &["gap_A", "d_A", "tau_s", "transmission", "off_resonance", "near_resonance", "relative_to_first"],
    );
    let mut first = None;
    let mut gp = Vec::new();
    for &g in &gaps {
        let r = double_barrier_time(d, g, v0, k, margin, &U)?;
        if r.near_resonance {
            w.warn(format!("gap {g} A is within the resonance margin"));
        }
        let f = *first.get_or_insert(r.tau);
        gt.push(vec![
            g.into(),
            d.into(),
            r.tau.into(),
            r.transmission.into(),
            r.off_resonance.into(),
            r.near_resonance.into(),
            (r.tau / f - 1.0).into(),
        ]);
        gp.push((g, r.tau));
    }
    w.table(&gt)?;
    w.chart(
        "optical_gaps",
        "Double barrier traversal time against gap",
        "gap (A)",
        "tau (s)",
        &[Series { label: format!("kappa d = {kd}"), points: gp }],
    )?;
    Ok(())
}

fn bohm(w: &mut Writer) -> Result<()> {
    let cfg = w.cfg;
    let v0 = cfg.positive_or("v0", 10.0)?;
    let d = cfg.positive_or("d", 5.0)?;
    let e = cfg.positive_or("e", 5.0)?;
    let dk = cfg.positive_or("dk", 0.02)?;
    let n = nodes(cfg)?;
    let def = BohmConfig::default();
    let bc = BohmConfig {
        t_start: cfg.f64_or("t_start", def.t_start)?,
        t_end: cfg.f64_or("t_end", def.t_end)?,
        tol: cfg.positive_or("tol", def.tol)?,
        ..def
    };
    if bc.t_end <= bc.t_start {
        return Err(Error::Config("t_end must exceed t_start".into()));
    }
    let strata = SeedStrata {
        transmitted: cfg.usize_or("seeds_transmitted", 24)?,
        front: cfg.usize_or("seeds_front", 8)?,
        front_mass: 1.0,
        rest: cfg.usize_or("seeds_rest", 8)?,
    };
    let path_points = cfg.usize_or("path_points", 200)?;
    if path_points < 2 {
        return Err(Error::Config("`path_points` must be at least 2".into()));
    }
    let field = PacketField::new(SpectralPacket::with_nodes(U.k_of_e(e), dk, n)?, PiecewisePotential::square(v0, d)?, U)?;
    let spec = TimeGridSpec::default();
    let recs = flux_records(&field, &[0.0, d], &spec);
    let flux = mean_times(&recs[0], &recs[1])?;
    let strata = SeedStrata { front_mass: (1.5 * flux.at_xi.total_plus_flux).min(1.0), ..strata };
    let seeds = quantile_seeds(&field, bc.t_start, &strata).map_err(|e| match e {
        Error::Domain(m) => Error::Config(format!("{m}; start earlier with a smaller t_start")),
        other => other,
    })?;
    let trajs = bohm_trajectories(&field, &seeds, &bc);
    let bt = bohm_transmission_time(&trajs, 0.0, d);

    let mut sum = Table::new(
        "bohm_trajectories",
        &["index", "x0_A", "weight", "final_x_A", "t_cross_0_s", "t_cross_d_s", "transmitted", "degenerate"],
    );
    note_numerics(&mut sum, n, Some(&spec));
    sum.note("seed_strata", format!("{} {} {:e} {}", strata.transmitted, strata.front, strata.front_mass, strata.rest));
    sum.note("flux_tau_t_s", format!("{:e}", flux.tau_t));
    sum.note("flux_var_additive_s2", format!("{:e}", flux.var_tau_t_additive));
    match &bt {
        Ok(b) => {
            sum.note("bohm_tau_t_s", format!("{:e}", b.tau_t));
            sum.note("bohm_var_direct_s2", format!("{:e}", b.var_direct));
            sum.note("bohm_transmitted", b.n_transmitted);
        }
        Err(e) => {
            sum.note("bohm_tau_t_s", "undefined");
            w.warn(format!("Bohm transmission time: {e}"));
        }
    }
    let mut paths = Table::new("bohm_paths", &["index", "t_s", "x_A"]);
    let mut series = Vec::new();
    for (i, tr) in trajs.iter().enumerate() {
        let c0 = tr.upward_crossings(0.0).first().copied().unwrap_or(f64::NAN);
        let cd = tr.upward_crossings(d).last().copied().unwrap_or(f64::NAN);
        if tr.degenerate {
            w.warn(format!("trajectory {i} stopped at a density node"));
        }
        sum.push(vec![
            i.into(),
            tr.x0.into(),
            tr.weight.into(),
            tr.final_x().into(),
            c0.into(),
            cd.into(),
            cd.is_finite().into(),
            tr.degenerate.into(),
        ]);
        let stride = tr.t.len().div_ceil(path_points).max(1);
        let mut pts = Vec::new();
        for j in (0..tr.t.len()).step_by(stride).chain(std::iter::once(tr.t.len() - 1)) {
            if pts.last().is_some_and(|&(t, _)| t == tr.t[j]) {
                continue;
            }
            paths.push(vec![i.into(), tr.t[j].into(), tr.x[j].into()]);
            pts.push((tr.t[j], tr.x[j]));
        }
        series.push(Series { label: format!("{i}"), points: pts });
    }
    if flux.low_confidence {
        w.warn("low-confidence flux reference".into());
    }
    w.table(&sum)?;
    w.table(&paths)?;
    let label_step = series.len().div_ceil(8).max(1);
    for (i, s) in series.iter_mut().enumerate() {
        if i % label_step != 0 {
            s.label.clear();
        }
    }
    w.chart("bohm_paths", "Bohm trajectories", "t (s)", "x (A)", &series)?;
    Ok(())
}
