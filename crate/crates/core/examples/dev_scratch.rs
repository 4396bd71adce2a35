// Scratch probe used during development; not part of the public surface.
use num_complex::Complex64;
use pu21::linalg::{cx, Mat2};
use pu21::totally_real::{embed_so21, TotallyRealPlane};

fn main() {
    // Probe: embed homomorphism residual at v = 2.
    let plane = TotallyRealPlane::new(2.0);
    let m1 = Mat2::new(1.3, 0.4, -0.7, (1.0 + 0.4 * -0.7) / 1.3);
    let m2 = Mat2::new(0.9, -1.2, 0.5, (1.0 + -1.2 * 0.5) / 0.9);
    let lhs = embed_so21(&(m1 * m2), &plane).unwrap();
    let rhs = embed_so21(&m1, &plane).unwrap() * embed_so21(&m2, &plane).unwrap();
    println!("embed hom residual v=2: {:.3e}", lhs.pu_distance(&rhs));
    let lhs0 = embed_so21(&(m1 * m2), &TotallyRealPlane::new(0.0)).unwrap();
    let rhs0 = embed_so21(&m1, &TotallyRealPlane::new(0.0)).unwrap()
        * embed_so21(&m2, &TotallyRealPlane::new(0.0)).unwrap();
    println!("embed hom residual v=0: {:.3e}", lhs0.pu_distance(&rhs0));
    let mm = m1 * m2;
    println!("m1m2 = {:?} det {}", mm, mm.det());

    // Probe: octagon relator trace as a function of a common shear.
    for genus in [1usize, 2, 3] {
        println!("--- genus {genus}");
        for k in -12..=12 {
            let sigma = k as f64 * 0.25;
            match octagon_trace(genus, sigma) {
                Ok(tr) => println!("  sigma {:+.2}: |tr| - 2 = {:+.6e}", sigma, tr.abs() - 2.0),
                Err(e) => println!("  sigma {:+.2}: error {e}", sigma),
            }
        }
    }
}

// Rebuild the polygon pairing maps with a shear along each source side.
fn octagon_trace(genus: usize, sigma: f64) -> Result<f64, String> {
    let n = 4 * genus;
    let vertices: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n as f64))
        .collect();
    let midpoints: Vec<Complex64> = (0..n)
        .map(|j| {
            let half_gap = std::f64::consts::PI / n as f64;
            let dir = std::f64::consts::PI * (2.0 * j as f64 + 1.0) / n as f64;
            let m = (1.0 - half_gap.sin()) / half_gap.cos();
            Complex64::from_polar(m, dir)
        })
        .collect();
    let side = |j: usize| (vertices[j % n], vertices[(j + 1) % n], midpoints[j % n]);

    let three_point = |src: (Complex64, Complex64, Complex64),
                       dst: (Complex64, Complex64, Complex64)|
     -> [Complex64; 4] {
        let std_map = |t: (Complex64, Complex64, Complex64)| -> [Complex64; 4] {
            let (z1, z2, z3) = t;
            [z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1)]
        };
        let inv = |m: [Complex64; 4]| -> [Complex64; 4] {
            let det = m[0] * m[3] - m[1] * m[2];
            [m[3] / det, -m[1] / det, -m[2] / det, m[0] / det]
        };
        let mul = |a: [Complex64; 4], b: [Complex64; 4]| -> [Complex64; 4] {
            [
                a[0] * b[0] + a[1] * b[2],
                a[0] * b[1] + a[1] * b[3],
                a[2] * b[0] + a[3] * b[2],
                a[2] * b[1] + a[3] * b[3],
            ]
        };
        mul(inv(std_map(dst)), std_map(src))
    };
    let mul = |a: [Complex64; 4], b: [Complex64; 4]| -> [Complex64; 4] {
        [
            a[0] * b[0] + a[1] * b[2],
            a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3],
        ]
    };
    let inv = |m: [Complex64; 4]| -> [Complex64; 4] {
        let det = m[0] * m[3] - m[1] * m[2];
        [m[3] / det, -m[1] / det, -m[2] / det, m[0] / det]
    };
    // Translation by sigma along the geodesic (p -> q).
    let shear = |p: Complex64, q: Complex64, s: f64| -> [Complex64; 4] {
        let n_map = [cx(1.0, 0.0), -p, cx(1.0, 0.0), -q];
        let diag = [
            cx((s / 2.0).exp(), 0.0),
            cx(0.0, 0.0),
            cx(0.0, 0.0),
            cx((-s / 2.0).exp(), 0.0),
        ];
        mul(inv(n_map), mul(diag, n_map))
    };

    let mut gens: Vec<[Complex64; 4]> = Vec::new();
    for k in 0..genus {
        let (p0, p1, pm) = side(4 * k + 2);
        let (q0, q1, qm) = side(4 * k);
        let base = three_point((p0, p1, pm), (q1, q0, qm));
        gens.push(mul(base, shear(p0, p1, sigma)));
    }
    for k in 0..genus {
        let (p0, p1, pm) = side(4 * k + 3);
        let (q0, q1, qm) = side(4 * k + 1);
        let base = three_point((p0, p1, pm), (q1, q0, qm));
        gens.push(mul(base, shear(p0, p1, sigma)));
    }
    // Relator = prod [a_k, b_k].
    let mut rel = [cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(1.0, 0.0)];
    for k in 0..genus {
        let a = gens[k];
        let b = gens[genus + k];
        rel = mul(rel, mul(mul(a, b), mul(inv(a), inv(b))));
    }
    let det = rel[0] * rel[3] - rel[1] * rel[2];
    let tr = (rel[0] + rel[3]) / det.sqrt();
    if tr.im.abs() > 1e-6 {
        return Err(format!("trace not real: {tr}"));
    }
    Ok(tr.re)
}
