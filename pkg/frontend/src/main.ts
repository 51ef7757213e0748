import { SegmentationClient, SocketLike } from "./client.js";
import { Viewer } from "./viewer.js";

function browserSocket(url: string): SocketLike {
  const ws = new WebSocket(url);
  const adapter: SocketLike = {
    send: (data) => ws.send(data),
    close: () => ws.close(),
    onmessage: null,
    onclose: null,
  };
  ws.onmessage = (ev) => adapter.onmessage?.(String(ev.data));
  ws.onclose = () => adapter.onclose?.();
  return adapter;
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const proto = location.protocol === "https:" ? "wss" : "ws";
const client = new SegmentationClient(browserSocket(`${proto}://${location.host}/ws`), {});
const viewer = new Viewer(client, el<HTMLCanvasElement>("canvas"), {
  banner: el("banner"),
  stats: el("stats"),
  metricsOut: el("metrics-out"),
  collapsedBadge: el("collapsed-badge"),
});

el<HTMLInputElement>("file").addEventListener("change", async (ev) => {
  const input = ev.target as HTMLInputElement;
  if (input.files?.[0]) {
    await viewer.loadFile(input.files[0]);
    el("hint").textContent = "hover over the image to segment";
  }
});

const paramIds = ["rays", "nodes", "radius", "seed_region"] as const;
for (const id of paramIds) {
  el<HTMLInputElement>(id).addEventListener("change", (ev) => {
    const value = Number((ev.target as HTMLInputElement).value);
    void client.setParams({ [id]: value });
  });
}
el<HTMLInputElement>("delta").addEventListener("input", (ev) => {
  const value = Number((ev.target as HTMLInputElement).value);
  el("delta-value").textContent = String(value);
  void client.setParams({ delta: value });
});
el<HTMLSelectElement>("zoom").addEventListener("change", (ev) => {
  viewer.setZoom(Number((ev.target as HTMLSelectElement).value));
});

for (const kind of ["inside", "outside"] as const) {
  el<HTMLInputElement>(`helper-${kind}`).addEventListener("change", () => {
    viewer.setHelperMode(kind);
  });
}
el<HTMLInputElement>("helper-off").addEventListener("change", () => {
  viewer.setHelperMode(null);
});
el<HTMLButtonElement>("clear-helpers").addEventListener("click", () => {
  void viewer.clearHelpers();
});

el<HTMLButtonElement>("commit").addEventListener("click", async () => {
  const done = await viewer.commit();
  el("hint").textContent = done
    ? "contour committed; mask export and metrics enabled"
    : "nothing to commit yet: hover over the image first";
});

el<HTMLButtonElement>("export-mask").addEventListener("click", async () => {
  const blob = await viewer.exportMask();
  if (!blob) return;
  const a = document.createElement("a");
  a.href = URL.createObjectURL(blob);
  a.download = "mask.png";
  a.click();
  URL.revokeObjectURL(a.href);
});

el<HTMLButtonElement>("metrics-btn").addEventListener("click", () => {
  const path = el<HTMLInputElement>("gt-path").value.trim();
  if (path) void viewer.showMetrics(path);
});
