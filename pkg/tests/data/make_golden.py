"""Regenerate golden_indicators.json from the fixture CSV pair.

Deliberately independent of the package under test: plain-text parsing,
direct date arithmetic and the one-line definitional formulas, written once
and frozen.  Run from this directory:

    python3 make_golden.py
"""

import json
import math
from datetime import date, datetime, timezone
from pathlib import Path

HERE = Path(__file__).parent
AS_OF = datetime(1997, 7, 30, tzinfo=timezone.utc)
LOC_PER_FP = 120.0
BAF = 1.30

SEVERITIES = ("blocking", "high", "medium", "low")
ENVIRONMENTS = ("internal_test", "external_test", "production")


def read_rows(name):
    lines = (HERE / name).read_text().splitlines()
    header = lines[0].split(";")
    return [dict(zip(header, line.split(";"))) for line in lines[1:]]


def to_date(text):
    return date.fromisoformat(text)


def to_instant(text):
    return datetime.strptime(text, "%Y-%m-%dT%H:%M:%SZ").replace(tzinfo=timezone.utc)


def midnight(d):
    return datetime(d.year, d.month, d.day, tzinfo=timezone.utc)


def hours(start, end):
    return (end - start).total_seconds() / 3600.0


def life_hours(release):
    start = midnight(to_date(release["released_at"]))
    end = AS_OF
    if release["life_end"]:
        end = min(end, midnight(to_date(release["life_end"])))
    return max(0.0, hours(start, end))


def value(x):
    return {"value": x}


def na(reason):
    return {"not_applicable": reason}


def indicator_set(release, anomalies):
    mine = [
        a
        for a in anomalies
        if a["release_id"] == release["release_id"] and to_instant(a["opened_at"]) <= AS_OF
    ]
    la = sum(1 for a in mine if a["environment"] != "internal_test")
    ta = len(mine) - la
    tna = len(mine)
    tl = life_hours(release)
    klcc = (
        int(release["new_lines"])
        + int(release["changed_lines"])
        + int(release["deleted_lines"])
    ) / 1000.0
    tpkl = int(release["total_product_loc"]) / 1000.0
    test_hours = float(release["test_hours"])

    repair = [
        hours(to_instant(a["opened_at"]), to_instant(a["closed_at"]))
        for a in mine
        if a["closed_at"] and to_instant(a["closed_at"]) <= AS_OF
    ]

    out = {}
    out["mttf"] = value(tl / la) if la else na("no_failures")
    out["mttr"] = value(sum(repair) / len(repair)) if repair else na("no_closed_anomalies")
    if not la:
        out["mtbf"] = na("no_failures")
    elif not repair:
        out["mtbf"] = na("no_closed_anomalies")
    else:
        out["mtbf"] = value(tl / la + sum(repair) / len(repair))
    out["tf_per_kloc"] = value(la / klcc) if klcc else na("no_changed_code")
    out["fr"] = value(la / tl) if tl else na("zero_life")
    out["quality"] = value(tna / klcc) if klcc else na("no_changed_code")
    if not la:
        out["av"] = na("no_failures")
    elif not repair:
        out["av"] = value(100.0)
    else:
        mttf = tl / la
        mttr = sum(repair) / len(repair)
        out["av"] = value(100.0 * mttf / (mttf + mttr))
    pcr = klcc / tpkl if tpkl else None
    out["pcr"] = value(pcr) if pcr is not None else na("no_changed_code")
    if pcr is None:
        out["ed"] = na("no_changed_code")
    elif not tl:
        out["ed"] = na("zero_life")
    else:
        out["ed"] = value(pcr / tl)
    out["ifr"] = value(ta / test_hours) if test_hours else na("zero_life")
    out["tqi"] = value(la / ta) if ta else na("no_test_anomalies")
    out["mtt_per_kloc"] = value(test_hours / klcc) if klcc else na("no_changed_code")
    out["klcc"] = value(klcc)
    out["fp"] = value(int(release["total_product_loc"]) / (LOC_PER_FP * BAF))
    return out


def distribution(release, releases, anomalies):
    released = midnight(to_date(release["released_at"]))
    mine_key = (to_date(release["released_at"]), release["version"])
    successors = [
        r
        for r in releases
        if r["production"] == "1"
        and r["component"] == release["component"]
        and r["release_id"] != release["release_id"]
        and (to_date(r["released_at"]), r["version"]) > mine_key
    ]
    window_end = AS_OF
    if successors:
        first = min(successors, key=lambda r: (to_date(r["released_at"]), r["version"]))
        window_end = min(window_end, midnight(to_date(first["released_at"])))

    new = [a for a in anomalies if a["release_id"] == release["release_id"]]
    inherited = [
        a
        for a in anomalies
        if a["release_id"] != release["release_id"]
        and a["component"] == release["component"]
        and to_instant(a["opened_at"]) < released
        and (not a["closed_at"] or to_instant(a["closed_at"]) >= released)
    ]
    solved = sum(
        1
        for a in new + inherited
        if a["closed_at"] and released <= to_instant(a["closed_at"]) < window_end
    )
    return {"new": len(new), "inherited": len(inherited), "solved": solved}


def production_order(releases):
    chosen = [r for r in releases if r["production"] == "1"]
    return sorted(chosen, key=lambda r: (to_date(r["released_at"]), r["version"]))


def stats_block(releases, anomalies):
    ordered = production_order(releases)
    sets = {r["release_id"]: indicator_set(r, anomalies) for r in ordered}

    mttf = [sets[r["release_id"]]["mttf"].get("value") for r in ordered]
    mttr = [sets[r["release_id"]]["mttr"].get("value") for r in ordered]
    effort = [float(r["dev_effort_pd"]) for r in ordered]

    clean = [x for x in mttf if x is not None]
    mean = sum(clean) / len(clean)
    variance = sum((x - mean) ** 2 for x in clean) / (len(clean) - 1)

    pairs = [(x, y) for x, y in zip(mttr, effort) if x is not None and y is not None]
    n = len(pairs)
    mx = sum(x for x, _ in pairs) / n
    my = sum(y for _, y in pairs) / n
    sxx = sum((x - mx) ** 2 for x, _ in pairs)
    syy = sum((y - my) ** 2 for _, y in pairs)
    sxy = sum((x - mx) * (y - my) for x, y in pairs)
    r = sxy / math.sqrt(sxx * syy)
    slope = sxy / sxx
    intercept = my - slope * mx
    r_squared = sxy * sxy / (sxx * syy)

    return {
        "mean_mttf": {"value": mean, "n": len(clean)},
        "stddev_mttf": {"value": math.sqrt(variance), "n": len(clean)},
        "pearson_mttr_dev_effort_pd": {"r": r, "n": n},
        "regression_mttr_dev_effort_pd": {
            "slope": slope,
            "intercept": intercept,
            "r_squared": r_squared,
            "n": n,
        },
    }


def main():
    releases = read_rows("releases.csv")
    anomalies = read_rows("anomalies.csv")

    golden = {
        "as_of": "1997-07-30T00:00:00Z",
        "life_hours": {
            r["release_id"]: life_hours(r) for r in releases if r["production"] == "1"
        },
        "indicators": {
            r["release_id"]: indicator_set(r, anomalies)
            for r in releases
            if r["production"] == "1"
        },
        "distribution": {
            r["release_id"]: distribution(r, releases, anomalies) for r in releases
        },
        "severity": {
            r["release_id"]: {
                s: sum(
                    1
                    for a in anomalies
                    if a["release_id"] == r["release_id"] and a["severity"] == s
                )
                for s in SEVERITIES
            }
            for r in releases
        },
        "environment": {
            r["release_id"]: {
                e: sum(
                    1
                    for a in anomalies
                    if a["release_id"] == r["release_id"] and a["environment"] == e
                )
                for e in ENVIRONMENTS
            }
            for r in releases
        },
        "stats": stats_block(releases, anomalies),
    }

    out = HERE / "golden_indicators.json"
    out.write_text(json.dumps(golden, indent=2, sort_keys=True) + "\n")
    print(f"wrote {out}")
    for rid, hours_ in sorted(golden["life_hours"].items()):
        print(f"  {rid}: TL={hours_}h")


if __name__ == "__main__":
    main()
