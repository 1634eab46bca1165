/** Overlay rendering helpers.
 *
 * Fixed palette (documented for tests): leaf marker green, background marker
 * red, lesion patches amber.  The colorizer is pure so it can be tested
 * without a canvas; the DOM layer feeds it decoded mask bytes.
 */

export const LEAF_MARKER_RGBA: [number, number, number, number] = [46, 204, 64, 153];
export const BACKGROUND_MARKER_RGBA: [number, number, number, number] = [255, 65, 54, 153];
export const LESION_PATCH_RGBA: [number, number, number, number] = [255, 176, 32, 153];
export const MASK_OVERLAY_RGBA: [number, number, number, number] = [46, 204, 64, 102];

/** Map single-channel mask samples (>=128 is foreground) to an RGBA buffer
 * tinted with the given colour; background pixels stay transparent. */
export function colorizeMask(
  mask: Uint8Array | Uint8ClampedArray,
  rgba: [number, number, number, number] = MASK_OVERLAY_RGBA,
): Uint8ClampedArray {
  const out = new Uint8ClampedArray(mask.length * 4);
  for (let i = 0; i < mask.length; i++) {
    if (mask[i] >= 128) {
      out[4 * i] = rgba[0];
      out[4 * i + 1] = rgba[1];
      out[4 * i + 2] = rgba[2];
      out[4 * i + 3] = rgba[3];
    }
  }
  return out;
}

export interface RectSelection {
  x: number;
  y: number;
  w: number;
  h: number;
}

/** Normalise two corner clicks into a rectangle; null when degenerate
 * (zero width or height after rounding), which prompts a re-click. */
export function selectionFromClicks(
  a: [number, number],
  b: [number, number],
): RectSelection | null {
  const w = Math.round(Math.abs(b[0] - a[0]));
  const h = Math.round(Math.abs(b[1] - a[1]));
  if (w < 1 || h < 1) return null;
  return { x: Math.min(a[0], b[0]), y: Math.min(a[1], b[1]), w, h };
}
