//! Surface type, filtration, degree and Num lattice of a few Gram matrices.

use slk::classify::s_parity;
use slk::lattice::{Element, GramMatrix};

fn main() -> slk::Result<()> {
    let examples = [
        ("plane", GramMatrix::from_upper_i64(3, &[3, 3, 3])?),
        ("quadric", GramMatrix::from_upper_i64(4, &[2, 2, 4, 0, 2, 2])?),
        ("K_2", GramMatrix::from_upper_i64(4, &[2, 4, 2, 3, 3, 3])?),
        ("identity", GramMatrix::identity(4)),
    ];
    for (name, g) in &examples {
        let l = g.lattice();
        print!("{name}: {}", l.surface_type());
        if let Ok(d) = l.degree() {
            print!(", delta = {d}");
        }
        println!(", s = 1 mod 2: {}", s_parity(g));
        if let Ok(st) = l.surface_structure() {
            let filt = l.codim_filtration()?;
            println!("  F^2 = {}", Element(filt.f2().to_vec()));
            for (i, v) in (0..g.rank()).map(|i| (i, Element::basis(g.rank(), i))) {
                println!("  e{}: rank {}, degree {}", i + 1, st.rank_of(&v), st.degree_of(l, &v));
            }
            let num = l.num_lattice(&filt)?;
            println!("  Num intersection form: {:?}", num.intersection_gram.to_rows());
        }
    }
    Ok(())
}
