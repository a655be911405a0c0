import init, { coc_curves, focus_distances, Demo } from "./pkg/dff_wasm_demo.js";

const $ = (id) => document.getElementById(id);
const SCALE = 3;
const COLORS = ["#1b6ac9", "#d9480f", "#2b8a3e", "#862e9c", "#e67700"];
let demo = null;

function axes(ctx, w, h, xmin, xmax, ymax, xlabel) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(40, 10, w - 50, h - 40);
  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
  ctx.fillText(xmin.toFixed(2), 40, h - 15);
  ctx.fillText(xmax.toFixed(2), w - 40, h - 15);
  ctx.fillText(xlabel, w / 2 - 20, h - 3);
  ctx.fillText(ymax.toPrecision(3), 2, 18);
  ctx.fillText("0", 28, h - 30);
}

function line(ctx, w, h, xs, ys, xmin, xmax, ymax, color) {
  ctx.strokeStyle = color;
  ctx.beginPath();
  xs.forEach((x, i) => {
    const px = 40 + ((x - xmin) / (xmax - xmin)) * (w - 50);
    const py = h - 30 - (Math.min(ys[i], ymax) / ymax) * (h - 40);
    i === 0 ? ctx.moveTo(px, py) : ctx.lineTo(px, py);
  });
  ctx.stroke();
}

function plotCoc() {
  const preset = $("preset").value;
  const lo = parseFloat($("cmin").value);
  const hi = parseFloat($("cmax").value);
  const n = 200;
  try {
    const table = coc_curves(preset, lo, hi, n);
    const dists = focus_distances(preset);
    const xs = Array.from({ length: n }, (_, k) => lo + ((hi - lo) * k) / (n - 1));
    const ymax = Math.min(Math.max(...table), 40);
    const c = $("coc");
    const ctx = c.getContext("2d");
    axes(ctx, c.width, c.height, lo, hi, ymax, "depth [m]");
    dists.forEach((d, i) => {
      const ys = table.slice(i * n, (i + 1) * n);
      line(ctx, c.width, c.height, xs, ys, lo, hi, ymax, COLORS[i % COLORS.length]);
      ctx.fillStyle = COLORS[i % COLORS.length];
      ctx.fillText(`focus ${d} m`, c.width - 110, 24 + 13 * i);
    });
  } catch (e) {
    $("status").textContent = String(e);
  }
}

function blit(canvas, rgba, size) {
  canvas.width = size * SCALE;
  canvas.height = size * SCALE;
  const tmp = document.createElement("canvas");
  tmp.width = size;
  tmp.height = size;
  tmp.getContext("2d").putImageData(new ImageData(new Uint8ClampedArray(rgba), size, size), 0, 0);
  const ctx = canvas.getContext("2d");
  ctx.imageSmoothingEnabled = false;
  ctx.drawImage(tmp, 0, 0, canvas.width, canvas.height);
}

function run() {
  $("status").textContent = "";
  if (demo) demo.free();
  demo = null;
  const num = (id) => parseFloat($(id).value);
  try {
    demo = new Demo($("preset").value, num("size"), num("near"), num("far"), num("noise"), num("radius"), num("samples"));
  } catch (e) {
    $("status").textContent = String(e);
    return;
  }
  const size = demo.size();
  const row = $("stack");
  row.innerHTML = "";
  const dists = focus_distances($("preset").value);
  for (let i = 0; i < demo.stack_len(); i++) {
    const div = document.createElement("div");
    const c = document.createElement("canvas");
    blit(c, demo.stack_rgba(i), size);
    div.append(c);
    const cap = document.createElement("div");
    cap.className = "cap";
    cap.textContent = `focus ${dists[i]} m`;
    div.append(cap);
    row.append(div);
  }
  blit($("truth"), demo.truth_rgba(), size);
  blit($("est"), demo.estimate_rgba(), size);
  $("rate").textContent = `${(100 * demo.in_bin_rate()).toFixed(1)}% in the true bin`;
}

function inspect(ev) {
  if (!demo) return;
  const rect = ev.target.getBoundingClientRect();
  const x = Math.floor((ev.clientX - rect.left) / SCALE);
  const y = Math.floor((ev.clientY - rect.top) / SCALE);
  const prof = demo.profile(x, y);
  if (prof.length === 0) return;
  const hyps = demo.hypotheses();
  const c = $("profile");
  const ctx = c.getContext("2d");
  const ymax = Math.max(...prof, 1e-9);
  axes(ctx, c.width, c.height, hyps[0], hyps[hyps.length - 1], ymax, "hypothesis depth [m]");
  line(ctx, c.width, c.height, hyps, prof, hyps[0], hyps[hyps.length - 1], ymax, "#1b6ac9");
  const t = demo.truth_at(x, y);
  const px = 40 + ((t - hyps[0]) / (hyps[hyps.length - 1] - hyps[0])) * (c.width - 50);
  ctx.strokeStyle = "#c00";
  ctx.beginPath();
  ctx.moveTo(px, 10);
  ctx.lineTo(px, c.height - 30);
  ctx.stroke();
  $("pinfo").textContent = `pixel (${x}, ${y}): truth ${t.toFixed(3)} m, estimate ${demo.estimate_at(x, y).toFixed(3)} m (red line marks the truth)`;
}

await init();
$("plot").onclick = plotCoc;
$("preset").onchange = plotCoc;
$("run").onclick = run;
$("est").onclick = inspect;
plotCoc();
run();
