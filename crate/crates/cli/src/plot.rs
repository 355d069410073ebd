//! Plain-text matplotlib scripts for produced CSV files.
//!
//! Scripts only read files this tool wrote next to them and carry the
//! configuration hash so a figure can be traced back to its inputs.

/// Script plotting |G_kl| on the x₁–x₂ plane at slice `k3` of a volume CSV.
/// The slice index is clamped into the grid.
pub fn slice_script(csv: &str, dims: [u32; 3], k3: usize, hash: &str) -> String {
    let k3 = k3.min(dims[2].saturating_sub(1) as usize);
    format!(
        r##"# generated by anisogreen; config sha256 {hash}
import numpy as np
import matplotlib.pyplot as plt

data = np.genfromtxt("{csv}", delimiter=",", comments="#", names=True)
n1, n2 = {n1}, {n2}
sel = data[data["k"] == {k3}]
fig, axes = plt.subplots(3, 3, figsize=(10, 9))
for row in range(3):
    for col in range(3):
        c = 3 * row + col
        mag = np.hypot(sel["c%d_re" % c], sel["c%d_im" % c]).reshape(n2, n1)
        im = axes[row][col].imshow(mag, origin="lower", aspect="auto")
        axes[row][col].set_title("|G%d%d|" % (row + 1, col + 1))
        fig.colorbar(im, ax=axes[row][col])
fig.suptitle("slice k = {k3}")
fig.tight_layout()
fig.savefig("{csv}.png", dpi=120)
"##,
        n1 = dims[0],
        n2 = dims[1],
    )
}

/// Script plotting the nine traces of a seismogram CSV.
pub fn trace_script(csv: &str, hash: &str) -> String {
    format!(
        r##"# generated by anisogreen; config sha256 {hash}
import numpy as np
import matplotlib.pyplot as plt

data = np.genfromtxt("{csv}", delimiter=",", comments="#", names=True)
fig, axes = plt.subplots(3, 3, sharex=True, figsize=(10, 8))
for k in range(3):
    for l in range(3):
        name = "g%d%d" % (k + 1, l + 1)
        axes[k][l].plot(data["t"], data[name])
        axes[k][l].set_title(name)
fig.tight_layout()
fig.savefig("{csv}.png", dpi=120)
"##
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slice_is_clamped_and_hashed() {
        let s = slice_script("green_000.csv", [4, 5, 2], 9, "abc123");
        assert!(s.contains("config sha256 abc123"));
        assert!(s.contains(r#"data["k"] == 1"#));
        assert!(s.contains("green_000.csv"));
    }

    #[test]
    fn trace_script_reads_only_its_csv() {
        let s = trace_script("seismogram.csv", "h");
        assert_eq!(s.matches(".csv\"").count(), 1);
    }
}
