//! `isv`: command-line front end over the ideal-simplicial-volume toolkit.
//!
//! Exit codes: 0 on success, 1 on domain errors (message on stderr,
//! nothing on stdout), 2 on usage errors.

use clap::{Parser, Subcommand, ValueEnum};
use idealvol::bounds::{degree_bounds, isv_bounds, ManifoldDescriptor, ManifoldKind};
use idealvol::extremal::{estimate_vl, SearchConfig};
use idealvol::idtri::{
    alternated_fundamental_cycle, detect_mg, euler_characteristic_m, local_degrees,
    marked_homology_ranks, quotient_cells, verify_marked_cycle, vertex_links, IdealTriangulation,
};
use idealvol::trunc::{ell_g, regular_radius_of_theta, RegularTruncTet};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "isv",
    version,
    about = "Ideal-simplicial-volume invariants and bounds for 3-manifolds with boundary"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Analyze a triangulation file: cell quotients, vertex links, Euler
    /// characteristic, orientability, minimal-family detection, fundamental
    /// cycle verification, and homology ranks
    Analyze {
        /// Triangulation in the v1 format
        file: PathBuf,
        /// Emit a single JSON object instead of text
        #[arg(long)]
        json: bool,
    },
    /// Closed-form table for the regular truncated-tetrahedron family
    #[command(group(clap::ArgGroup::new("param").required(true).args(["g", "ell"])))]
    Regular {
        /// Genus parameter: use the dihedral angle pi/(3g)
        #[arg(long)]
        g: Option<u32>,
        /// Internal edge length
        #[arg(long)]
        ell: Option<f64>,
    },
    /// Estimate the extremal volume V_ell by multistart search
    Vl {
        /// Lower bound on all six internal edge lengths
        #[arg(long)]
        ell: f64,
        #[arg(long, default_value_t = 50)]
        restarts: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Assemble lower/upper/exact invariant bounds for a described manifold
    Bounds {
        #[arg(long)]
        kind: KindArg,
        /// Riemannian volume
        #[arg(long)]
        volume: Option<f64>,
        /// Smallest return length (geodesic boundary)
        #[arg(long)]
        ell: Option<f64>,
        /// Genus parameter of the minimal family
        #[arg(long)]
        g: Option<u32>,
        /// Tetrahedron count of a known ideal triangulation
        #[arg(long)]
        ctets: Option<u64>,
        /// All boundary components have amenable fundamental group
        #[arg(long)]
        amenable: bool,
        #[arg(long)]
        json: bool,
    },
    /// The three mapping-degree bounds between minimal-family members
    Degree {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        gp: u32,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Cusped,
    Geodesic,
    Mg,
    Generic,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

/// Round to 12 significant digits for stable, diffable JSON output.
fn sig12(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let s = format!("{x:.11e}");
    Value::from(s.parse::<f64>().unwrap())
}

fn run(cmd: Cmd) -> Result<String, String> {
    match cmd {
        Cmd::Analyze { file, json } => analyze(&file, json),
        Cmd::Regular { g, ell } => regular(g, ell),
        Cmd::Vl {
            ell,
            restarts,
            seed,
            json,
        } => vl(ell, restarts, seed, json),
        Cmd::Bounds {
            kind,
            volume,
            ell,
            g,
            ctets,
            amenable,
            json,
        } => bounds(kind, volume, ell, g, ctets, amenable, json),
        Cmd::Degree { g, gp } => degree(g, gp),
    }
}

fn analyze(file: &PathBuf, as_json: bool) -> Result<String, String> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
    let tri = IdealTriangulation::parse(&text).map_err(|e| e.to_string())?;
    let q = quotient_cells(&tri);
    let links = vertex_links(&tri).map_err(|e| e.to_string())?;
    let chi = euler_characteristic_m(&tri).map_err(|e| e.to_string())?;
    let orientable = tri.orientable();
    let mg = detect_mg(&tri);
    let ranks = marked_homology_ranks(&tri);

    let cycle = if orientable {
        let z = alternated_fundamental_cycle(&tri).map_err(|e| e.to_string())?;
        Some((
            z.terms.len(),
            z.l1_norm().to_string(),
            verify_marked_cycle(&tri, &z),
            local_degrees(&tri, &z)
                .into_iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>(),
        ))
    } else {
        None
    };

    let isv = if mg.is_mg {
        let mut d = ManifoldDescriptor::new(ManifoldKind::Mg);
        d.g = mg.g.map(|g| g as u32);
        Some(isv_bounds(&d).map_err(|e| e.to_string())?)
    } else {
        None
    };

    if as_json {
        let links_json: Vec<Value> = links
            .iter()
            .map(|l| {
                json!({
                    "euler_char": l.euler_char,
                    "orientable": l.orientable,
                    "genus_or_crosscaps": l.genus_or_crosscaps,
                })
            })
            .collect();
        let cycle_json = cycle.as_ref().map(|(terms, norm, verified, degrees)| {
            json!({
                "terms": terms,
                "l1_norm": norm,
                "verified": verified,
                "local_degrees": degrees,
            })
        });
        let isv_json = isv.as_ref().map(|r| {
            json!({
                "lower": sig12(r.lower),
                "upper": r.upper.map(sig12),
                "exact": r.exact.map(sig12),
                "provenance": r.provenance,
                "notes": r.notes,
            })
        });
        let obj = json!({
            "file": file.display().to_string(),
            "tets": tri.tet_count(),
            "vertex_classes": q.vertex_classes.len(),
            "edge_classes": q.edge_classes.len(),
            "face_classes": q.face_classes.len(),
            "links": links_json,
            "euler_characteristic": chi.to_string(),
            "orientable": orientable,
            "is_mg": mg.is_mg,
            "g": mg.g,
            "cycle": cycle_json,
            "homology_ranks": [ranks.0, ranks.1, ranks.2, ranks.3],
            "isv": isv_json,
        });
        return Ok(format!("{}\n", serde_json::to_string_pretty(&obj).unwrap()));
    }

    let mut out = String::new();
    out.push_str(&format!("triangulation: {}\n", file.display()));
    out.push_str(&format!("tetrahedra:     {}\n", tri.tet_count()));
    out.push_str(&format!(
        "cells (V,E,F):  ({}, {}, {})\n",
        q.vertex_classes.len(),
        q.edge_classes.len(),
        q.face_classes.len()
    ));
    for (i, l) in links.iter().enumerate() {
        let kind = if l.orientable {
            format!("orientable, genus {}", l.genus_or_crosscaps)
        } else {
            format!("non-orientable, {} crosscaps", l.genus_or_crosscaps)
        };
        out.push_str(&format!(
            "link {i}:         chi = {}, {kind}\n",
            l.euler_char
        ));
    }
    out.push_str(&format!("euler char:     {chi}\n"));
    out.push_str(&format!("orientable:     {orientable}\n"));
    out.push_str(&format!(
        "one-edge family: {}{}\n",
        mg.is_mg,
        mg.g.map(|g| format!(" (g = {g})")).unwrap_or_default()
    ));
    match &cycle {
        Some((terms, norm, verified, degrees)) => {
            out.push_str(&format!(
                "fundamental cycle: {terms} terms, l1 norm {norm}, verified {verified}\n"
            ));
            out.push_str(&format!("local degrees:  [{}]\n", degrees.join(", ")));
        }
        None => out.push_str("fundamental cycle: none (not orientable)\n"),
    }
    out.push_str(&format!(
        "homology ranks: H0 = {}, H1 = {}, H2 = {}, H3 = {}\n",
        ranks.0, ranks.1, ranks.2, ranks.3
    ));
    if let Some(r) = &isv {
        out.push_str(&format!(
            "ideal simplicial volume: exactly {}\n",
            r.exact.unwrap()
        ));
        for p in &r.provenance {
            out.push_str(&format!("  via {p}\n"));
        }
        for n in &r.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
    }
    Ok(out)
}

fn regular(g: Option<u32>, ell: Option<f64>) -> Result<String, String> {
    let tet = match (g, ell) {
        (Some(g), None) => {
            let ell = ell_g(g).map_err(|_| format!("g = {g} outside the family (need g >= 2)"))?;
            RegularTruncTet::from_ell(ell).map_err(|e| e.to_string())?
        }
        (None, Some(ell)) => RegularTruncTet::from_ell(ell).map_err(|e| e.to_string())?,
        _ => return Err("pass exactly one of --g or --ell".into()),
    };
    let r = regular_radius_of_theta(tet.theta).map_err(|e| e.to_string())?;
    let mut out = String::new();
    out.push_str("regular truncated tetrahedron\n");
    out.push_str(&format!("  edge length ell    = {:.9}\n", tet.ell));
    out.push_str(&format!("  dihedral angle     = {:.9}\n", tet.theta));
    out.push_str(&format!("  vertex radius r    = {:.9}\n", r));
    out.push_str(&format!("  volume             = {:.9}\n", tet.volume));
    Ok(out)
}

fn vl(ell: f64, restarts: u32, seed: u64, as_json: bool) -> Result<String, String> {
    let cfg = SearchConfig {
        restarts,
        seed,
        ..SearchConfig::new(ell)
    };
    let res = estimate_vl(&cfg).map_err(|e| e.to_string())?;
    let l2 = ell_g(2).unwrap();
    let certified = ell <= l2;
    let label = if certified { "certified" } else { "heuristic" };
    let regular = idealvol::trunc::regular_volume(ell).ok();

    if as_json {
        let verts: Vec<Value> = res
            .best_config
            .coords()
            .iter()
            .map(|p| Value::from(p.iter().map(|&c| sig12(c)).collect::<Vec<_>>()))
            .collect();
        let obj = json!({
            "ell_min": sig12(ell),
            "restarts": restarts,
            "seed": seed,
            "best_volume": sig12(res.best_volume),
            "restart_index": res.restart_index,
            "feasible": res.feasible,
            "label": label,
            "regular_volume": regular.map(sig12),
        "best_config": verts,
        });
        return Ok(format!("{}\n", serde_json::to_string_pretty(&obj).unwrap()));
    }
    let mut out = String::new();
    out.push_str(&format!(
        "V_ell estimate at ell = {ell} ({restarts} restarts, seed {seed})\n"
    ));
    out.push_str(&format!(
        "  best volume   = {:.9} ({label})\n",
        res.best_volume
    ));
    out.push_str(&format!("  feasible      = {}\n", res.feasible));
    out.push_str(&format!("  from restart  = {}\n", res.restart_index));
    if let Some(rv) = regular {
        out.push_str(&format!("  regular family closed form = {rv:.9}\n"));
    }
    if !certified {
        out.push_str(
            "  note: beyond the certified range; the regular maximizer is only a heuristic\n",
        );
    }
    Ok(out)
}

fn bounds(
    kind: KindArg,
    volume: Option<f64>,
    ell: Option<f64>,
    g: Option<u32>,
    ctets: Option<u64>,
    amenable: bool,
    as_json: bool,
) -> Result<String, String> {
    let kind = match kind {
        KindArg::Cusped => ManifoldKind::CuspedHyperbolic,
        KindArg::Geodesic => ManifoldKind::GeodesicBoundary,
        KindArg::Mg => ManifoldKind::Mg,
        KindArg::Generic => ManifoldKind::Generic,
    };
    let mut d = ManifoldDescriptor::new(kind);
    d.volume = volume;
    d.return_length = ell;
    d.g = g;
    d.complexity_upper = ctets;
    d.amenable_boundary = d.amenable_boundary || amenable;
    let r = isv_bounds(&d).map_err(|e| e.to_string())?;

    if as_json {
        let obj = json!({
            "kind": format!("{kind:?}"),
            "lower": sig12(r.lower),
            "upper": r.upper.map(sig12),
            "exact": r.exact.map(sig12),
            "provenance": r.provenance,
            "notes": r.notes,
        });
        return Ok(format!("{}\n", serde_json::to_string_pretty(&obj).unwrap()));
    }
    let mut out = String::new();
    out.push_str(&format!("ideal simplicial volume bounds ({kind:?})\n"));
    out.push_str(&format!("  lower = {:.9}\n", r.lower));
    match r.upper {
        Some(u) => out.push_str(&format!("  upper = {u:.9}\n")),
        None => out.push_str("  upper = (none)\n"),
    }
    if let Some(e) = r.exact {
        out.push_str(&format!("  exact = {e:.9}\n"));
    }
    for p in &r.provenance {
        out.push_str(&format!("  via {p}\n"));
    }
    for n in &r.notes {
        out.push_str(&format!("  note: {n}\n"));
    }
    Ok(out)
}

fn degree(g: u32, gp: u32) -> Result<String, String> {
    let b = degree_bounds(g, gp).map_err(|e| e.to_string())?;
    let mut out = String::new();
    out.push_str(&format!("degree bounds for maps (g = {g}) -> (g' = {gp})\n"));
    out.push_str(&format!(
        "  ideal simplicial volume: deg <= {} (ratio {:.6})\n",
        b.ideal, b.ideal_ratio
    ));
    out.push_str(&format!(
        "  double volume:           deg <= {} (ratio {:.6})\n",
        b.double, b.double_ratio
    ));
    out.push_str(&format!(
        "  boundary surface:        deg <= {} (ratio {:.6})\n",
        b.boundary, b.boundary_ratio
    ));
    Ok(out)
}
