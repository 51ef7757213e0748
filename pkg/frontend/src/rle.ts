// Masks travel as run-length encoding: [start, length] pairs over row-major
// pixel indices of the set pixels.

export type Rle = [number, number][];

export function rleToMask(rle: Rle, width: number, height: number): Uint8Array {
  const mask = new Uint8Array(width * height);
  for (const [start, length] of rle) {
    if (start < 0 || start + length > mask.length) {
      throw new Error(`run [${start}, ${length}] outside ${width}x${height} mask`);
    }
    mask.fill(1, start, start + length);
  }
  return mask;
}

export function maskToRle(mask: Uint8Array): Rle {
  const runs: Rle = [];
  let start = -1;
  for (let i = 0; i <= mask.length; i++) {
    const set = i < mask.length && mask[i] !== 0;
    if (set && start < 0) start = i;
    if (!set && start >= 0) {
      runs.push([start, i - start]);
      start = -1;
    }
  }
  return runs;
}

export function dice(a: Uint8Array, b: Uint8Array): number {
  if (a.length !== b.length) throw new Error("mask sizes differ");
  let na = 0;
  let nb = 0;
  let inter = 0;
  for (let i = 0; i < a.length; i++) {
    if (a[i]) na++;
    if (b[i]) nb++;
    if (a[i] && b[i]) inter++;
  }
  if (na + nb === 0) throw new Error("dice undefined for two empty masks");
  return (2 * inter) / (na + nb);
}
