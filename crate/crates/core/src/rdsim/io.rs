//! Trajectory export and re-import. The CSV files are the plotting
//! contract for external tools: `t,x,u,v` per snapshot row,
//! `t,x_probe,u,v` per probe row and `t,n,amp_u,amp_v` per mode row,
//! all in the deterministic 17-significant-digit format.

use super::{Field, Grid, Trajectory};
use crate::error::{Error, Result};
use crate::report::fmt_g17;
use std::f64::consts::PI;
use std::io::Write;

pub fn write_snapshots_csv<W: Write>(traj: &Trajectory, w: &mut W) -> std::io::Result<()> {
    w.write_all(b"t,x,u,v\n")?;
    for (k, t) in traj.times.iter().enumerate() {
        let f = &traj.snapshots[k];
        for j in 0..traj.grid.m {
            writeln!(
                w,
                "{},{},{},{}",
                fmt_g17(*t),
                fmt_g17(traj.grid.point(j)),
                fmt_g17(f.u[j]),
                fmt_g17(f.v[j])
            )?;
        }
    }
    Ok(())
}

pub fn write_probes_csv<W: Write>(traj: &Trajectory, w: &mut W) -> std::io::Result<()> {
    w.write_all(b"t,x_probe,u,v\n")?;
    for (k, t) in traj.times.iter().enumerate() {
        for (p, &x) in traj.probe_x.iter().enumerate() {
            let (u, v) = traj.probes[p][k];
            writeln!(
                w,
                "{},{},{},{}",
                fmt_g17(*t),
                fmt_g17(x),
                fmt_g17(u),
                fmt_g17(v)
            )?;
        }
    }
    Ok(())
}

pub fn write_modes_csv<W: Write>(traj: &Trajectory, w: &mut W) -> std::io::Result<()> {
    w.write_all(b"t,n,amp_u,amp_v\n")?;
    for (k, t) in traj.times.iter().enumerate() {
        for n in 0..traj.mode_amp_u[k].len() {
            writeln!(
                w,
                "{},{},{},{}",
                fmt_g17(*t),
                n,
                fmt_g17(traj.mode_amp_u[k][n]),
                fmt_g17(traj.mode_amp_v[k][n])
            )?;
        }
    }
    Ok(())
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Io(format!("bad {what} value: {s:?}")))
}

/// Rebuilds a trajectory from the three exported CSV files (the inverse
/// of the writers above, up to float formatting, which is lossless).
pub fn read_trajectory(snapshots: &str, probes: &str, modes: &str) -> Result<Trajectory> {
    // Snapshots drive the times and the grid.
    let mut times: Vec<f64> = Vec::new();
    let mut xs: Vec<f64> = Vec::new();
    let mut fields: Vec<Field> = Vec::new();
    for (idx, line) in snapshots.lines().enumerate() {
        if idx == 0 {
            if line != "t,x,u,v" {
                return Err(Error::Io(format!("unexpected snapshot header {line:?}")));
            }
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 4 {
            return Err(Error::Io(format!(
                "snapshot row has {} columns",
                cols.len()
            )));
        }
        let t = parse_f64(cols[0], "t")?;
        let x = parse_f64(cols[1], "x")?;
        let u = parse_f64(cols[2], "u")?;
        let v = parse_f64(cols[3], "v")?;
        if times.last() != Some(&t) {
            times.push(t);
            fields.push(Field {
                u: Vec::new(),
                v: Vec::new(),
            });
        }
        if times.len() == 1 {
            xs.push(x);
        }
        let f = fields.last_mut().unwrap();
        f.u.push(u);
        f.v.push(v);
    }
    if times.is_empty() || xs.len() < 2 {
        return Err(Error::Io("snapshot file holds no data".into()));
    }
    let m = xs.len();
    let l = xs[m - 1] / PI;
    let grid = Grid { l, m };

    let mut probe_x: Vec<f64> = Vec::new();
    let mut probe_series: Vec<Vec<(f64, f64)>> = Vec::new();
    for (idx, line) in probes.lines().enumerate() {
        if idx == 0 {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 4 {
            return Err(Error::Io(format!("probe row has {} columns", cols.len())));
        }
        let x = parse_f64(cols[1], "x_probe")?;
        let u = parse_f64(cols[2], "u")?;
        let v = parse_f64(cols[3], "v")?;
        let p = match probe_x.iter().position(|&px| px == x) {
            Some(p) => p,
            None => {
                probe_x.push(x);
                probe_series.push(Vec::new());
                probe_x.len() - 1
            }
        };
        probe_series[p].push((u, v));
    }

    let mut mode_amp_u: Vec<Vec<f64>> = Vec::new();
    let mut mode_amp_v: Vec<Vec<f64>> = Vec::new();
    let mut last_t = f64::NAN;
    for (idx, line) in modes.lines().enumerate() {
        if idx == 0 {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 4 {
            return Err(Error::Io(format!("mode row has {} columns", cols.len())));
        }
        let t = parse_f64(cols[0], "t")?;
        let au = parse_f64(cols[2], "amp_u")?;
        let av = parse_f64(cols[3], "amp_v")?;
        if t != last_t {
            mode_amp_u.push(Vec::new());
            mode_amp_v.push(Vec::new());
            last_t = t;
        }
        mode_amp_u.last_mut().unwrap().push(au);
        mode_amp_v.last_mut().unwrap().push(av);
    }

    if probe_series.iter().any(|s| s.len() != times.len()) || mode_amp_u.len() != times.len() {
        return Err(Error::Io(
            "trajectory files disagree on sample count".into(),
        ));
    }

    Ok(Trajectory {
        grid,
        t_end: *times.last().unwrap(),
        times,
        snapshots: fields,
        probe_x,
        probes: probe_series,
        mode_amp_u,
        mode_amp_v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinetics::ModelParams;
    use crate::rdsim::{simulate, FieldIc, IcSpec, Perturbation, SimConfig, Waveform};

    #[test]
    fn csv_round_trip_preserves_trajectory() {
        let p = ModelParams::new(0.6018, 0.0077, 0.4, 19.37, 0.2, 1.6).unwrap();
        let grid = Grid::new(1.6, 64).unwrap();
        let config = SimConfig {
            dt: 1e-3,
            t_end: 0.05,
            save_stride: 10,
            ic: IcSpec {
                u: FieldIc {
                    base: 0.4,
                    terms: vec![Perturbation {
                        amplitude: 0.01,
                        wavenumber: 2.0,
                        shape: Waveform::Sin,
                    }],
                },
                v: FieldIc::constant(0.4),
            },
            probes: vec![0.0, 1.0],
            n_modes: 4,
        };
        let traj = simulate(&p, &grid, &config).unwrap();

        let mut snaps = Vec::new();
        let mut probes = Vec::new();
        let mut modes = Vec::new();
        write_snapshots_csv(&traj, &mut snaps).unwrap();
        write_probes_csv(&traj, &mut probes).unwrap();
        write_modes_csv(&traj, &mut modes).unwrap();

        let back = read_trajectory(
            &String::from_utf8(snaps).unwrap(),
            &String::from_utf8(probes).unwrap(),
            &String::from_utf8(modes).unwrap(),
        )
        .unwrap();

        assert_eq!(back.times, traj.times);
        assert_eq!(back.grid.m, traj.grid.m);
        assert!((back.grid.l - traj.grid.l).abs() < 1e-12);
        assert_eq!(back.snapshots, traj.snapshots);
        assert_eq!(back.probes, traj.probes);
        assert_eq!(back.mode_amp_u, traj.mode_amp_u);
    }
}
