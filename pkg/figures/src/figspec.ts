// The figure catalog: which panel CSVs feed which image, what goes on each
// axis, and which column carries the precomputed shading predicate. Panel
// names are the CSV stems emitted by `collider-lab figures`; each panel also
// has a row in figstats.csv whose predicate/percent strings are reproduced
// verbatim as the panel annotation.

export interface PanelSpec {
  name: string;
  title: string;
  kind: "curve" | "plane";
  x: string;
  y?: string;
  series: string[];
  xLabel: string;
  yLabel: string;
}

export interface FigureSpec {
  id: string;
  output: string;
  shadeColumn: string;
  panels: PanelSpec[];
}

const BOTH = ["bias_unadj", "bias_adj"];

function curve(
  name: string,
  title: string,
  x: string,
  series: string[],
  yLabel: string,
): PanelSpec {
  return { name, title, kind: "curve", x, series, xLabel: x, yLabel };
}

function plane(name: string, title: string, x: string, y: string): PanelSpec {
  return { name, title, kind: "plane", x, y, series: [], xLabel: x, yLabel: y };
}

export const FIGURES: FigureSpec[] = [
  {
    id: "fig2",
    output: "fig2.svg",
    shadeColumn: "grey",
    panels: [
      curve("fig2_a", "a = b = c = d", "a", ["bias_adj"], "adjusted bias"),
      curve("fig2_b", "a = b, c = d = a/2", "a", ["bias_adj"], "adjusted bias"),
      curve("fig2_c", "c = d, a = b = c/2", "c", ["bias_adj"], "adjusted bias"),
    ],
  },
  {
    id: "fig3a",
    output: "fig3a.svg",
    shadeColumn: "grey",
    panels: [plane("fig3_a", "a = b vs c = d, rho = 0", "a", "c")],
  },
  {
    id: "fig3b",
    output: "fig3b.svg",
    shadeColumn: "grey",
    panels: [plane("fig3_b", "a = b = c vs rho", "a", "rho")],
  },
  {
    id: "fig4",
    output: "fig4.svg",
    shadeColumn: "grey",
    panels: [
      curve("fig4_a", "a = b = c = d, rho = 0.1", "a", BOTH, "asymptotic bias"),
      curve("fig4_b", "a = b = c = d, rho = 0.2", "a", BOTH, "asymptotic bias"),
      curve("fig4_c", "a = b = c = d, rho = 0.4", "a", BOTH, "asymptotic bias"),
    ],
  },
  {
    id: "fig5a",
    output: "fig5a.svg",
    shadeColumn: "grey",
    panels: [curve("fig5_a", "butterfly, all coefficients equal", "a", BOTH, "asymptotic bias")],
  },
  {
    id: "fig5b",
    output: "fig5b.svg",
    shadeColumn: "grey",
    panels: [plane("fig5_b", "butterfly, a = b = c = d vs e = f", "a", "e")],
  },
  {
    id: "fig6",
    output: "fig6.svg",
    shadeColumn: "grey",
    panels: [
      curve("fig6_a", "binary, a = b = c = d, rho = 0.1", "a", BOTH, "asymptotic bias"),
      curve("fig6_b", "binary, a = b = c = d, rho = 0.2", "a", BOTH, "asymptotic bias"),
      curve("fig6_c", "binary, a = b = c = d, rho = 0.4", "a", BOTH, "asymptotic bias"),
    ],
  },
  {
    id: "fig7b",
    output: "fig7b.svg",
    shadeColumn: "grey",
    panels: [curve("fig7_b", "direct W edge, a = b = c = d = g, rho = 0", "a", BOTH, "asymptotic bias")],
  },
  {
    id: "fig8a",
    output: "fig8a.svg",
    shadeColumn: "grey",
    panels: [curve("fig8_a", "binary butterfly, all coefficients equal", "a", BOTH, "asymptotic bias")],
  },
  {
    id: "fig8b",
    output: "fig8b.svg",
    shadeColumn: "grey",
    panels: [plane("fig8_b", "binary butterfly, a = b = c = d vs e = f", "a", "e")],
  },
];

export function figureById(id: string): FigureSpec {
  const spec = FIGURES.find((fig) => fig.id === id);
  if (spec === undefined) {
    const known = FIGURES.map((fig) => fig.id).join(", ");
    throw new Error(`unknown figure id "${id}" (known: ${known})`);
  }
  return spec;
}
