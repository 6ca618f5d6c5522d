//! Writes the ASP and ARG fixtures: one PQR file per residue and MSMS-style
//! meshes at several densities.
//!
//! Atoms are placed from ideal internal coordinates (extended side chains)
//! with CHARMM-style partial charges. The surface is the outermost crossing
//! of a smooth blob density with its unit level set along rays from the atom
//! centroid, sampled at icosphere vertices; vertex normals come from the
//! density gradient.
//!
//! ```text
//! cargo run -p pcm-bench --example make_residue_fixtures -- crates/bench/fixtures
//! ```

use std::fmt::Write as _;
use std::path::PathBuf;

use pcm_bem::surface::{generate_icosphere, write_msms_mesh};
use pcm_bem::{TriangleMesh, Vec3};

const LEVELS: [u32; 3] = [2, 3, 4];
/// Added to each atomic radius before blending.
const INFLATE: f64 = 0.4;
/// Sharpness of the blob blend.
const BLOB: f64 = 2.5;

struct Atom {
    name: &'static str,
    pos: Vec3,
    charge: f64,
    radius: f64,
}

/// Place `d` bonded to `c` with bond length, angle `b-c-d` and dihedral
/// `a-b-c-d` in degrees.
fn place(a: Vec3, b: Vec3, c: Vec3, bond: f64, angle: f64, torsion: f64) -> Vec3 {
    let (theta, phi) = (angle.to_radians(), torsion.to_radians());
    let bc = (c - b).normalized();
    let n = (b - a).cross(bc).normalized();
    let m = n.cross(bc);
    let d = Vec3::new(
        -bond * theta.cos(),
        bond * theta.sin() * phi.cos(),
        bond * theta.sin() * phi.sin(),
    );
    c + bc * d.x() + m * d.y() + n * d.z()
}

fn radius_of(name: &str) -> f64 {
    match name.as_bytes()[0] {
        b'N' => 1.85,
        b'O' => 1.70,
        b'H' => 1.10,
        _ => 1.90,
    }
}

/// Builds atoms from `(name, a, b, c, bond, angle, torsion, charge)` rows
/// whose references name earlier atoms.
struct Builder {
    atoms: Vec<Atom>,
}

impl Builder {
    fn backbone() -> Builder {
        let n = Vec3::ZERO;
        let ca = Vec3::new(1.46, 0.0, 0.0);
        let c = ca + Vec3::new(-(111f64.to_radians().cos()), 111f64.to_radians().sin(), 0.0) * 1.52;
        let mut b = Builder { atoms: Vec::new() };
        b.push("N", n, -0.30);
        b.push("CA", ca, 0.21);
        b.push("C", c, 0.34);
        b
    }

    fn push(&mut self, name: &'static str, pos: Vec3, charge: f64) {
        self.atoms.push(Atom {
            name,
            pos,
            charge,
            radius: radius_of(name),
        });
    }

    fn at(&self, name: &str) -> Vec3 {
        self.atoms
            .iter()
            .find(|a| a.name == name)
            .unwrap_or_else(|| panic!("no atom {name}"))
            .pos
    }

    #[allow(clippy::too_many_arguments)]
    fn add(&mut self, name: &'static str, refs: [&str; 3], bond: f64, angle: f64, torsion: f64, charge: f64) {
        let p = place(
            self.at(refs[0]),
            self.at(refs[1]),
            self.at(refs[2]),
            bond,
            angle,
            torsion,
        );
        self.push(name, p, charge);
    }

    /// Charged termini, alpha hydrogen and beta carbon shared by both residues.
    fn common(&mut self, cb_charge: f64) {
        self.add("OT1", ["N", "CA", "C"], 1.25, 118.0, 180.0, -0.67);
        self.add("OT2", ["N", "CA", "C"], 1.25, 118.0, 0.0, -0.67);
        self.add("HT1", ["C", "CA", "N"], 1.01, 109.5, 60.0, 0.33);
        self.add("HT2", ["C", "CA", "N"], 1.01, 109.5, 180.0, 0.33);
        self.add("HT3", ["C", "CA", "N"], 1.01, 109.5, -60.0, 0.33);
        self.add("CB", ["N", "C", "CA"], 1.53, 110.1, 122.6, cb_charge);
        self.add("HA", ["N", "C", "CA"], 1.09, 109.0, -118.0, 0.10);
    }

    /// Two hydrogens on `c`, staggered about an anti chain continuation.
    fn methylene(&mut self, names: [&'static str; 2], refs: [&str; 3]) {
        self.add(names[0], refs, 1.09, 109.5, 60.0, 0.09);
        self.add(names[1], refs, 1.09, 109.5, -60.0, 0.09);
    }
}

fn aspartate() -> Vec<Atom> {
    let mut b = Builder::backbone();
    b.common(-0.28);
    b.methylene(["HB1", "HB2"], ["N", "CA", "CB"]);
    b.add("CG", ["N", "CA", "CB"], 1.52, 113.0, 180.0, 0.62);
    b.add("OD1", ["CA", "CB", "CG"], 1.25, 118.0, 0.0, -0.76);
    b.add("OD2", ["CA", "CB", "CG"], 1.25, 118.0, 180.0, -0.76);
    b.atoms
}

fn arginine() -> Vec<Atom> {
    let mut b = Builder::backbone();
    b.common(-0.18);
    b.methylene(["HB1", "HB2"], ["N", "CA", "CB"]);
    b.add("CG", ["N", "CA", "CB"], 1.52, 113.0, 180.0, -0.18);
    b.methylene(["HG1", "HG2"], ["CA", "CB", "CG"]);
    b.add("CD", ["CA", "CB", "CG"], 1.52, 111.0, 180.0, 0.20);
    b.methylene(["HD1", "HD2"], ["CB", "CG", "CD"]);
    b.add("NE", ["CB", "CG", "CD"], 1.46, 112.0, 180.0, -0.70);
    b.add("HE", ["CG", "CD", "NE"], 1.01, 118.0, 0.0, 0.44);
    b.add("CZ", ["CG", "CD", "NE"], 1.33, 124.0, 180.0, 0.64);
    b.add("NH1", ["CD", "NE", "CZ"], 1.33, 120.0, 0.0, -0.80);
    b.add("NH2", ["CD", "NE", "CZ"], 1.33, 120.0, 180.0, -0.80);
    b.add("HH11", ["NE", "CZ", "NH1"], 1.01, 120.0, 0.0, 0.46);
    b.add("HH12", ["NE", "CZ", "NH1"], 1.01, 120.0, 180.0, 0.46);
    b.add("HH21", ["NE", "CZ", "NH2"], 1.01, 120.0, 0.0, 0.46);
    b.add("HH22", ["NE", "CZ", "NH2"], 1.01, 120.0, 180.0, 0.46);
    b.atoms
}

fn density(atoms: &[Atom], p: Vec3) -> f64 {
    atoms
        .iter()
        .map(|a| {
            let r = a.radius + INFLATE;
            (-BLOB * ((p - a.pos).norm_squared() / (r * r) - 1.0)).exp()
        })
        .sum()
}

fn gradient(atoms: &[Atom], p: Vec3) -> Vec3 {
    atoms.iter().fold(Vec3::ZERO, |g, a| {
        let r = a.radius + INFLATE;
        let d = p - a.pos;
        let w = (-BLOB * (d.norm_squared() / (r * r) - 1.0)).exp();
        g + d * (-2.0 * BLOB * w / (r * r))
    })
}

/// Outermost point on the ray `c + t·u` with unit density.
fn surface_along(atoms: &[Atom], c: Vec3, u: Vec3, t_max: f64) -> Vec3 {
    let f = |t: f64| density(atoms, c + u * t) - 1.0;
    let step = 0.02;
    let mut hi = t_max;
    while f(hi - step) < 0.0 {
        hi -= step;
        assert!(hi > step, "ray from the centroid never enters the molecule");
    }
    let mut lo = hi - step;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if f(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    c + u * (0.5 * (lo + hi))
}

fn molecular_mesh(atoms: &[Atom], level: u32) -> TriangleMesh {
    let k = atoms.len() as f64;
    let c = atoms.iter().fold(Vec3::ZERO, |s, a| s + a.pos) * (1.0 / k);
    let t_max = atoms
        .iter()
        .map(|a| a.pos.distance(c) + a.radius + INFLATE + 2.0)
        .fold(0.0, f64::max);
    let sphere = generate_icosphere(1.0, level).expect("icosphere");
    let vertices: Vec<Vec3> = sphere
        .vertices()
        .iter()
        .map(|&u| surface_along(atoms, c, u.normalized(), t_max))
        .collect();
    let normals: Vec<Vec3> = vertices
        .iter()
        .map(|&p| (gradient(atoms, p) * -1.0).normalized())
        .collect();
    TriangleMesh::new(vertices, sphere.faces().to_vec(), Some(normals)).expect("valid molecular mesh")
}

fn pqr(residue: &str, atoms: &[Atom]) -> String {
    let mut out = format!("REMARK  synthetic {residue} zwitterion, ideal geometry, CHARMM-style charges\n");
    for (i, a) in atoms.iter().enumerate() {
        let _ = writeln!(
            out,
            "ATOM  {:5} {:<4} {residue}     1    {:8.3}{:8.3}{:8.3} {:7.4} {:6.4}",
            i + 1,
            a.name,
            a.pos.x(),
            a.pos.y(),
            a.pos.z(),
            a.charge,
            a.radius
        );
    }
    out.push_str("END\n");
    out
}

fn main() {
    let dir = PathBuf::from(
        std::env::args()
            .nth(1)
            .unwrap_or_else(|| "crates/bench/fixtures".into()),
    );
    std::fs::create_dir_all(&dir).expect("fixture directory");
    for (name, atoms) in [("asp", aspartate()), ("arg", arginine())] {
        let total: f64 = atoms.iter().map(|a| a.charge).sum();
        std::fs::write(dir.join(format!("{name}.pqr")), pqr(&name.to_uppercase(), &atoms)).unwrap();
        for level in LEVELS {
            let mesh = molecular_mesh(&atoms, level);
            let clearance = atoms
                .iter()
                .map(|a| mesh.distance_to(a.pos))
                .fold(f64::INFINITY, f64::min);
            let (vert, face) = write_msms_mesh(&mesh);
            std::fs::write(dir.join(format!("{name}_l{level}.vert")), vert).unwrap();
            std::fs::write(dir.join(format!("{name}_l{level}.face")), face).unwrap();
            println!(
                "{name} level {level}: {} faces, {} vertices, total charge {total:+.2}, min atom clearance {clearance:.3} Å",
                mesh.num_faces(),
                mesh.num_vertices()
            );
        }
    }
}
