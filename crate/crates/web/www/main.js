import init, { ellipse_boundary, membership, size_table } from "./pkg/derivcone_web.js";

const colors = ["#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const $ = (id) => document.getElementById(id);

function draw() {
  const canvas = $("plot");
  const ctx = canvas.getContext("2d");
  const kmax = Number($("kmax").value);
  const rays = Number($("rays").value);
  const curves = [];
  for (let k = 0; k <= kmax; k++) curves.push(ellipse_boundary(k, rays));

  let span = 1;
  for (const c of curves) for (const v of c) if (Number.isFinite(v)) span = Math.max(span, Math.abs(v));
  const scale = (canvas.width / 2 - 10) / span;
  const px = (x) => canvas.width / 2 + x * scale;
  const py = (y) => canvas.height / 2 - y * scale;

  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#ddd";
  ctx.beginPath();
  ctx.moveTo(0, py(0)); ctx.lineTo(canvas.width, py(0));
  ctx.moveTo(px(0), 0); ctx.lineTo(px(0), canvas.height);
  ctx.stroke();

  curves.forEach((c, k) => {
    ctx.strokeStyle = colors[k % colors.length];
    ctx.beginPath();
    let pen = false;
    for (let i = 0; i <= c.length / 2; i++) {
      const j = (i % (c.length / 2)) * 2;
      const [x, y] = [c[j], c[j + 1]];
      if (!Number.isFinite(x)) { pen = false; continue; }
      if (pen) ctx.lineTo(px(x), py(y)); else ctx.moveTo(px(x), py(y));
      pen = true;
    }
    ctx.stroke();
  });
  ctx.fillStyle = "#000";
  for (const [x, y] of [[0, 0], [0, 4], [3, 0]]) ctx.fillRect(px(x) - 2, py(y) - 2, 4, 4);

  $("legend").innerHTML = curves
    .map((_, k) => `<span style="color:${colors[k % colors.length]}">k = ${k}</span>`)
    .join(" &nbsp; ") + ` &nbsp; (axis half-width ${span.toFixed(2)}; squares mark the foci)`;
}

function run(target, f) {
  try {
    $(target).textContent = f();
  } catch (e) {
    $(target).textContent = `error: ${e.message ?? e}`;
  }
}

await init();
$("draw").onclick = () => draw();
$("check").onclick = () =>
  run("verdict", () => {
    const v = JSON.parse(membership($("kind").value, Number($("mn").value), Number($("mk").value), $("point").value));
    return `margin ${v.margin}\nbinding coefficient ${v.binding_index ?? "-"}\ndecision ${v.decision}`;
  });
$("sizes").onclick = () => run("table", () => size_table($("skind").value, Number($("sn").value), Number($("sk").value)));
draw();
