export type FigureId =
  | "fig1"
  | "fig2"
  | "fig3"
  | "fig5"
  | "fig6"
  | "figA1"
  | "figA2"
  | "figB1";

export interface FigureSpec {
  id: FigureId;
  inputs: Record<string, string[]>; // file -> required columns ([] = JSON report)
  annotations: string[]; // CSS classes of required guide elements
}

export const FIGURE_SPECS: Record<FigureId, FigureSpec> = {
  fig1: {
    id: "fig1",
    inputs: {
      "fig1_modes.csv": ["xi", "J", "Gamma", "k_dom_over_pi"],
      "fig1_dispersion.csv": ["k_over_pi", "J_k"],
      "fig1_scaling.csv": ["N", "series", "value"],
    },
    annotations: ["guide-k1d", "guide-ncubed"],
  },
  fig2: {
    id: "fig2",
    inputs: {
      "fig2_grid_k02.csv": [],
      "fig2_grid_k05.csv": [],
      "fig2_fidelity_map.csv": ["xi", "k1_over_pi", "k2_over_pi", "F_ansatz"],
    },
    annotations: [],
  },
  fig3: {
    id: "fig3",
    inputs: {
      "fig3_trajectory.csv": ["t", "p2", "F_target"],
      "fig3_trajectory_snapshot_t0.csv": [],
      "fig3_trajectory_snapshot_t5.csv": [],
      "fig3_trajectory_snapshot_t20.csv": [],
    },
    annotations: ["guide-snapshot-time"],
  },
  fig5: {
    id: "fig5",
    inputs: {
      "fig5a_i.csv": ["t", "p2", "F_xi1"],
      "fig5a_ii.csv": ["t", "p2", "F_xi1"],
      "fig5a_iii.csv": ["t", "p2", "F_xi1"],
      "fig5b_grid.csv": ["gamma_prime", "gamma_deph", "max_fidelity"],
    },
    annotations: ["guide-p-floor"],
  },
  fig6: {
    id: "fig6",
    inputs: {
      "fig6_t2.csv": ["t", "tau", "T2"],
      "fig6_t2_eigenstate.csv": ["t", "tau", "T2"],
      "fig6_t2_maxima.json": [],
    },
    annotations: ["guide-tau-max"],
  },
  figA1: {
    id: "figA1",
    inputs: {
      "figA1_02pi_xi1.csv": ["N", "series", "value"],
      "figA1_047pi_xi1.csv": ["N", "series", "value"],
      "figA1_05pi_xi1.csv": ["N", "series", "value"],
      "figA1_05pi_xi2.csv": ["N", "series", "value"],
      "figA1_05pi_xi3.csv": ["N", "series", "value"],
    },
    annotations: ["guide-slope-1", "guide-slope-2"],
  },
  figA2: {
    id: "figA2",
    inputs: {
      "figA2_r2.csv": ["N", "series", "value"],
      "figA2_r3.csv": ["N", "series", "value"],
    },
    annotations: ["guide-slope-1"],
  },
  figB1: {
    id: "figB1",
    inputs: {
      "figB1_transfer.csv": ["m_ex", "gamma_prime", "gamma_deph", "p_transfer", "fidelity"],
    },
    annotations: [],
  },
};
