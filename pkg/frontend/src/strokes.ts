/** Stroke capture and wire serialisation.
 *
 * The wire format must match the backend's stroke schema byte-for-byte in
 * structure: {strokes: [{points: [[x, y], ...], radius, label}]}.
 */
import type { StrokeLabel, StrokeSetWire, StrokeWire } from './types';

export const PEN_RADIUS_DEFAULT = 8;
export const PEN_RADIUS_MIN = 1;
export const PEN_RADIUS_MAX = 32;

export function clampPenRadius(radius: number): number {
  return Math.min(PEN_RADIUS_MAX, Math.max(PEN_RADIUS_MIN, Math.round(radius)));
}

export interface Stroke {
  points: [number, number][];
  radius: number;
  label: StrokeLabel;
}

export function newStroke(label: StrokeLabel, radius: number): Stroke {
  return { points: [], radius: clampPenRadius(radius), label };
}

export function addPoint(stroke: Stroke, x: number, y: number): void {
  stroke.points.push([x, y]);
}

export function serializeStrokes(strokes: Stroke[]): StrokeSetWire {
  return {
    strokes: strokes.map(
      (s): StrokeWire => ({
        points: s.points.map(([x, y]) => [x, y] as [number, number]),
        radius: s.radius,
        label: s.label,
      }),
    ),
  };
}

export function parseStrokes(wire: StrokeSetWire): Stroke[] {
  return wire.strokes.map((s) => ({
    points: s.points.map(([x, y]) => [x, y] as [number, number]),
    radius: s.radius,
    label: s.label,
  }));
}

export function hasLeafStroke(strokes: Stroke[]): boolean {
  return strokes.some((s) => s.label === 'leaf' && s.points.length > 0);
}
