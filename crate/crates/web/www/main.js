import init, { classify_equation, solve_equation, level_phase } from "./pkg/abel_air_web.js";

const $ = (id) => document.getElementById(id);
const out = $("out");
const expr = () => $("expr").value;

function show(f) {
  out.classList.remove("err");
  try {
    out.textContent = JSON.stringify(JSON.parse(f()), null, 2);
  } catch (e) {
    out.classList.add("err");
    out.textContent = String(e.message ?? e);
  }
}

function hue(phase) {
  const h = ((phase / Math.PI + 1) * 180) % 360;
  const c = 1, x = c * (1 - Math.abs(((h / 60) % 2) - 1));
  const [r, g, b] = h < 60 ? [c, x, 0] : h < 120 ? [x, c, 0] : h < 180 ? [0, c, x]
    : h < 240 ? [0, x, c] : h < 300 ? [x, 0, c] : [c, 0, x];
  return [r * 255, g * 255, b * 255];
}

function plot() {
  const canvas = $("canvas");
  const { width: w, height: h } = canvas;
  out.classList.remove("err");
  let grid;
  try {
    grid = level_phase(expr(), -2, 2, -2, 2, w, h);
  } catch (e) {
    out.classList.add("err");
    out.textContent = String(e.message ?? e);
    return;
  }
  const ctx = canvas.getContext("2d");
  const img = ctx.createImageData(w, h);
  grid.forEach((p, i) => {
    const [r, g, b] = Number.isFinite(p) ? hue(p) : [255, 255, 255];
    img.data.set([r, g, b, 255], 4 * i);
  });
  ctx.putImageData(img, 0, 0);
  out.textContent = `plotted ${w}×${h} grid`;
}

await init();
out.textContent = "ready";
$("classify").onclick = () => show(() => classify_equation(expr()));
$("solve").onclick = () => show(() => solve_equation(expr(), 1e-6));
$("plot").onclick = plot;
document.querySelectorAll("a[data-expr]").forEach((a) => {
  a.onclick = (ev) => {
    ev.preventDefault();
    $("expr").value = a.dataset.expr;
  };
});
