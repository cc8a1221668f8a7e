"""Line versus circle: periodic transports against a non-almost-periodic one.

Along a straight line the transport is periodic in ``c`` and an almost
period near ``2 pi/t`` turns up.  Along the unit circle ``|b(c)|`` creeps
up towards its envelope, so later windows always beat the first one and a
non-AP witness is found.

    python demos/line_vs_circle.py [t] [out_dir]
"""
import sys
import tempfile

from holonomy_lab.cli import run_demo_embedding


def main(t=1.0, out_dir=None):
    out_dir = out_dir or tempfile.mkdtemp(prefix="line_vs_circle_")
    res = run_demo_embedding(t, out_dir)
    print(f"t = {t:g}, c in {res['c_range']}, spacing {res['grid_spacing']:.4g}")
    line = res["line"]["checks"]["a_periods"]
    periods = line["witness"]["almost_periods"] if line.get("witness") else []
    print(f"line:   {res['line']['verdict']}; first almost periods {[round(x, 6) for x in periods[:3]]}")
    w = res["circle"]["checks"]["b_witness"]
    print(f"circle: {res['circle']['verdict']}")
    if w.get("witness"):
        wi = w["witness"]
        print(f"  I = [{wi['I'][0]:.4g}, {wi['I'][1]:.4g}], r = {wi['r']:.4g}, "
              f"eps = {wi['epsilon']:.3e} over {wi['windows_tested']} windows")
    print(f"files in {out_dir}")


if __name__ == "__main__":
    args = sys.argv[1:]
    main(float(args[0]) if args else 1.0, args[1] if len(args) > 1 else None)
