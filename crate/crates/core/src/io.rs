//! Trajectory export.
//!
//! CSV: header `n,j,x_j,t_n,U,k`, one row per stored cell, floats in the
//! shortest representation that parses back to the same value.
//!
//! Binary, all little-endian:
//!
//! ```text
//! b"LXFT"  u32 version (= 1)
//! f64 dx  f64 dt  i64 j_min  i64 j_max  u64 level_count
//! per level n = 0..level_count:
//!     i64 first  u64 count
//!     f64 U_pad_left  f64 U_pad_right  f64 k_pad_left  f64 k_pad_right
//!     count × f64 U   count × f64 k
//! ```

use std::io::{Read, Write};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::StaggeredField;
use crate::scheme::StaggeredTrajectory;

pub const BINARY_MAGIC: &[u8; 4] = b"LXFT";
pub const BINARY_VERSION: u32 = 1;

pub const CSV_HEADER: [&str; 6] = ["n", "j", "x_j", "t_n", "U", "k"];

/// One row of the trajectory CSV.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub n: usize,
    pub j: i64,
    pub x_j: f64,
    pub t_n: f64,
    #[serde(rename = "U")]
    pub u: f64,
    pub k: f64,
}

pub fn write_trajectory_csv<W: Write>(traj: &StaggeredTrajectory, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    let l = &traj.lattice;
    for (n, (u, k)) in traj.u_levels.iter().zip(&traj.k_levels).enumerate() {
        for ((j, uj), kj) in u.iter().zip(&k.values) {
            w.write_record(&[
                n.to_string(),
                j.to_string(),
                l.x(j).to_string(),
                l.t(n).to_string(),
                uj.to_string(),
                kj.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_trajectory_csv<R: Read>(input: R) -> Result<Vec<TrajectoryRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Config(format!("unexpected trajectory header {header:?}")));
    }
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

/// Grid metadata and levels as stored in the binary format.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryDump {
    pub dx: f64,
    pub dt: f64,
    pub j_min: i64,
    pub j_max: i64,
    pub u_levels: Vec<StaggeredField>,
    pub k_levels: Vec<StaggeredField>,
}

impl TrajectoryDump {
    pub fn from_trajectory(traj: &StaggeredTrajectory) -> Self {
        let l = &traj.lattice;
        Self {
            dx: l.dx,
            dt: l.dt,
            j_min: l.j_min,
            j_max: l.j_max,
            u_levels: traj.u_levels.clone(),
            k_levels: traj.k_levels.clone(),
        }
    }
}

pub fn write_trajectory_binary<W: Write>(traj: &StaggeredTrajectory, mut out: W) -> Result<()> {
    let l = &traj.lattice;
    out.write_all(BINARY_MAGIC)?;
    out.write_u32::<LittleEndian>(BINARY_VERSION)?;
    out.write_f64::<LittleEndian>(l.dx)?;
    out.write_f64::<LittleEndian>(l.dt)?;
    out.write_i64::<LittleEndian>(l.j_min)?;
    out.write_i64::<LittleEndian>(l.j_max)?;
    out.write_u64::<LittleEndian>(traj.u_levels.len() as u64)?;
    for (u, k) in traj.u_levels.iter().zip(&traj.k_levels) {
        out.write_i64::<LittleEndian>(u.first)?;
        out.write_u64::<LittleEndian>(u.values.len() as u64)?;
        for v in [u.pad_left, u.pad_right, k.pad_left, k.pad_right] {
            out.write_f64::<LittleEndian>(v)?;
        }
        for v in u.values.iter().chain(&k.values) {
            out.write_f64::<LittleEndian>(*v)?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn read_trajectory_binary<R: Read>(mut input: R) -> Result<TrajectoryDump> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if &magic != BINARY_MAGIC {
        return Err(Error::Config("not a trajectory dump (bad magic)".into()));
    }
    let version = input.read_u32::<LittleEndian>()?;
    if version != BINARY_VERSION {
        return Err(Error::Config(format!("unsupported dump version {version}")));
    }
    let dx = input.read_f64::<LittleEndian>()?;
    let dt = input.read_f64::<LittleEndian>()?;
    let j_min = input.read_i64::<LittleEndian>()?;
    let j_max = input.read_i64::<LittleEndian>()?;
    let levels = input.read_u64::<LittleEndian>()? as usize;
    let mut u_levels = Vec::with_capacity(levels.min(1 << 20));
    let mut k_levels = Vec::with_capacity(levels.min(1 << 20));
    for n in 0..levels {
        let first = input.read_i64::<LittleEndian>()?;
        let count = input.read_u64::<LittleEndian>()? as usize;
        let mut pads = [0.0; 4];
        input.read_f64_into::<LittleEndian>(&mut pads)?;
        let mut u = vec![0.0; count];
        let mut k = vec![0.0; count];
        input.read_f64_into::<LittleEndian>(&mut u)?;
        input.read_f64_into::<LittleEndian>(&mut k)?;
        u_levels.push(StaggeredField::new(n, first, u, pads[0], pads[1]));
        k_levels.push(StaggeredField::new(n, first, k, pads[2], pads[3]));
    }
    Ok(TrajectoryDump {
        dx,
        dt,
        j_min,
        j_max,
        u_levels,
        k_levels,
    })
}
