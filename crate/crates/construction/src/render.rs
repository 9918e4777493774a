use lm_engine::Cell;

use crate::cell::{Codec, CopyCell, LayeredCell, MergeSym, Probe, Sweep};

const PASTELS: [[u8; 3]; 8] = [
    [250, 240, 200],
    [190, 215, 245],
    [200, 240, 200],
    [245, 200, 220],
    [220, 205, 245],
    [245, 225, 190],
    [200, 240, 240],
    [230, 230, 230],
];

/// Colours for space-time pictures: walls black, init cells red, pastel per output letter, with
/// counters, copy heads and probes drawn over the letter colour.
pub fn render_palette(codec: Codec) -> impl Fn(Cell) -> [u8; 3] {
    move |c| match codec.decode_lossy(c) {
        LayeredCell::Wall => [0, 0, 0],
        LayeredCell::Init => [220, 30, 30],
        LayeredCell::Composite(l) => {
            if matches!(l.merge.probe, Probe::Right | Probe::Left) {
                return [230, 120, 0];
            }
            if matches!(l.copy, CopyCell::Head(_)) {
                return [0, 150, 60];
            }
            match l.sweep {
                Sweep::Plus(_) => return [150, 0, 150],
                Sweep::Minus(_) => return [0, 120, 150],
                Sweep::Cmp { .. } => return [60, 60, 200],
                Sweep::Go(Some(_)) | Sweep::Stop(_) => return [110, 110, 230],
                _ => {}
            }
            if matches!(l.merge.sym, MergeSym::M) {
                return [200, 170, 0];
            }
            if l.time.is_some() {
                return [120, 120, 120];
            }
            match l.output {
                None => [255, 255, 255],
                Some(a) => PASTELS[a as usize % PASTELS.len()],
            }
        }
    }
}
