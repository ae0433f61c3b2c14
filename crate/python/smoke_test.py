"""Smoke test for the Python bindings. Build first with
`pip install -e crates/fankoszul-py --no-build-isolation`."""

import json

import fankoszul_py


def main():
    code, report = fankoszul_py.run(["fan", "dual", "--fan", "fx1"])
    assert code == 0, report
    assert json.loads(report)["results"]["rays"] == [[1, 0], [0, 1]]

    table = json.loads(fankoszul_py.ic_table("fx2"))
    row = next(r for r in table["results"]["rows"] if r["sigma"] == "[]" and r["tau"] == "[0,1,2,3]")
    assert row["degrees"] == [-3, -1]

    code, _ = fankoszul_py.run(["verify", "purity", "--fan", "fx3"])
    assert code == 1
    code, err = fankoszul_py.run(["ic", "[9]", "--fan", "fx1"])
    assert code == 2 and json.loads(err)["kind"] == "FaceNotInFan"
    print("smoke test passed")


if __name__ == "__main__":
    main()
