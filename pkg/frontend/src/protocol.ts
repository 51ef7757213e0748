// Message shapes of the segmentation service protocol. One JSON object per
// WebSocket message; every reply to a sequenced request echoes its seq.

export interface Seed {
  x: number;
  y: number;
}

export interface TemplateParams {
  rays: number;
  nodes: number;
  radius: number;
  delta: number;
  seed_region: number;
}

export const DEFAULT_PARAMS: TemplateParams = {
  rays: 60,
  nodes: 40,
  radius: 120,
  delta: 2,
  seed_region: 5,
};

export type HelperKind = "inside" | "outside";

export interface LoadedMessage {
  type: "loaded";
  session: string;
  width: number;
  height: number;
}

export interface ResultMessage {
  type: "result";
  seq: number;
  boundary: number[];
  contour: [number, number][];
  cut_cost: number;
  collapsed: boolean;
  elapsed_us: number;
  seed: Seed;
  width: number;
  height: number;
  mask_rle?: [number, number][];
}

export interface CommittedMessage {
  type: "committed";
  session: string;
  seq: number;
  width: number;
  height: number;
  pixels: number;
  cut_cost: number;
  mask_rle?: [number, number][];
}

export interface MetricsMessage {
  type: "metrics";
  session: string;
  dsc: number | null;
  hd_px: number | null;
}

export interface ParamsSetMessage {
  type: "params_set";
  session: string;
  params: TemplateParams;
}

export interface HelperAckMessage {
  type: "helper_added" | "helpers_cleared";
  session: string;
  count: number;
}

export interface ErrorMessage {
  type: "error";
  code: string;
  detail: string;
  seq?: number;
}

export type ServerMessage =
  | LoadedMessage
  | ResultMessage
  | CommittedMessage
  | MetricsMessage
  | ParamsSetMessage
  | HelperAckMessage
  | ErrorMessage;

export function parseServerMessage(text: string): ServerMessage | null {
  let value: unknown;
  try {
    value = JSON.parse(text);
  } catch {
    return null;
  }
  if (typeof value !== "object" || value === null) return null;
  const type = (value as { type?: unknown }).type;
  if (typeof type !== "string") return null;
  return value as ServerMessage;
}
