use lxf_core::io::{
    read_trajectory_binary, read_trajectory_csv, write_trajectory_binary, write_trajectory_csv,
    TrajectoryDump,
};
use lxf_core::{build_lattice, builtin_problem, run};

fn small_run() -> lxf_core::StaggeredTrajectory {
    let p = builtin_problem("moving-jump").unwrap();
    run(&p, &build_lattice(&p, 16, 0.1).unwrap()).unwrap()
}

#[test]
fn csv_round_trips_every_value() {
    let traj = small_run();
    let mut buf = Vec::new();
    write_trajectory_csv(&traj, &mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.starts_with("n,j,x_j,t_n,U,k\n"));
    let rows = read_trajectory_csv(&buf[..]).unwrap();
    let cells: usize = traj.u_levels.iter().map(|l| l.values.len()).sum();
    assert_eq!(rows.len(), cells);
    for r in rows {
        assert_eq!(r.u.to_bits(), traj.u(r.n, r.j).to_bits());
        assert_eq!(r.k.to_bits(), traj.k(r.n, r.j).to_bits());
        assert_eq!(r.x_j.to_bits(), traj.lattice.x(r.j).to_bits());
        assert_eq!(r.t_n.to_bits(), traj.lattice.t(r.n).to_bits());
    }
}

#[test]
fn binary_round_trips_exactly() {
    let traj = small_run();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.lxft");
    write_trajectory_binary(&traj, std::fs::File::create(&path).unwrap()).unwrap();
    let back = read_trajectory_binary(std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(back, TrajectoryDump::from_trajectory(&traj));
}

#[test]
fn binary_rejects_foreign_files() {
    assert!(read_trajectory_binary(&b"NOPE\x01\0\0\0"[..]).is_err());
    let mut buf = Vec::new();
    write_trajectory_binary(&small_run(), &mut buf).unwrap();
    buf.truncate(buf.len() - 3);
    assert!(read_trajectory_binary(&buf[..]).is_err());
}
