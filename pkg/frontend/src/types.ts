/** Wire types mirroring the backend schemas exactly. */

export type StrokeLabel = 'leaf' | 'background';

export interface StrokeWire {
  points: [number, number][];
  radius: number;
  label: StrokeLabel;
}

export interface StrokeSetWire {
  strokes: StrokeWire[];
}

export interface SegmentMetadata {
  bbox: [number, number, number, number];
  area: number;
  orientation: number;
}

export interface LeafResponse {
  leaf_id: string;
  mask_png: string; // base64 PNG, 0/255 single channel
  segment: SegmentMetadata;
  strokes: StrokeSetWire; // echo of the submitted strokes
}

export interface PatchResult {
  x: number;
  y: number;
  w: number;
  h: number;
  large: boolean;
  probabilities: number[];
}

export interface DiagnosisReportWire {
  format: string;
  version: number;
  class_names: string[];
  ranked: [number, number][]; // [disease id, probability] descending
  per_patch: PatchResult[];
  severity: number;
  leaf: { bbox: number[]; area: number; orientation: number };
  any_large_region: boolean;
  no_lesions_found: boolean;
}

export interface ReselectResponse {
  probabilities: number[];
  ranked: [number, number][];
}

export interface DiseaseEntry {
  id: number;
  name: string;
  symptoms: string;
  management: string;
  reference_image: string;
  area_scale: 'small' | 'large';
}

export interface CatalogResponse {
  format: string;
  version: number;
  diseases: DiseaseEntry[];
}

export interface HealthResponse {
  version: string;
  model_id: string;
}
