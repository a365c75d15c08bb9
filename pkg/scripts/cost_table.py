#!/usr/bin/env python3
"""Search plan for d_v=3, g=8, a<=12, b<=3 and its expansion cost, next to the transcribed characterization tables."""

from qclets.known_codes import TABLE_II_BOTTOM, TABLE_II_TOP, TABLE_III_DV3_G8, char_table
from qclets.plan import build_plan, compute_target_set, cost_report, parent_cover, render_table
from qclets.search import default_b_search, structure_db


def main():
    db = structure_db(3, 8, 12, default_b_search(3, 3))
    for qc in (True, False):
        ts = compute_target_set(db, (12, 3), qc_only=qc)
        plan = build_plan(db, ts, parent_cover(db, ts, qc_only=qc))
        print(f"{'QC' if qc else 'general'}: |L|={len(ts.in_range)} |L_t|={len(ts)} cost={cost_report(plan)}")
        if qc:
            print(render_table(plan))
    print("published:", TABLE_III_DV3_G8)
    print("transcribed top table cost:", cost_report(char_table(TABLE_II_TOP)))
    print("transcribed bottom table cost:", cost_report(char_table(TABLE_II_BOTTOM)))


if __name__ == "__main__":
    main()
