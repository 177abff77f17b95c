//! Blowing the plane up at multiples of the point class, and back down.

use slk::blowup::{blowdown, blowup, build_kn, p2, p2_point_class};
use slk::lattice::Element;

fn main() -> slk::Result<()> {
    let plane = p2();
    let p = p2_point_class();
    for n in 0..5 {
        let up = blowup(&plane, &p.scale(&n.into()))?;
        assert_eq!(up.lattice.gram(), build_kn(&n.into())?.matrix());
        println!("K_{n}: delta = {}\n{}", up.degree()?, up.lattice.gram());
        let down = blowdown(&up, &Element::basis(4, 0))?;
        println!("  blown down along e1: z = {}, gram {:?}", down.z, down.lattice.lattice.gram().to_rows());
    }
    Ok(())
}
