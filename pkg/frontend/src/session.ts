/** Annotation session state machine.
 *
 * Drives the three user actions (submit strokes, request diagnosis, reselect
 * a region) against the API client and holds everything the DOM layer
 * renders.  All pipeline numbers come from API responses; this module never
 * computes probabilities, severities or masks itself.  At most one request
 * per action is in flight; extra clicks while busy are ignored.
 */
import { ApiClient, ApiError } from './api';
import { reportView, rerank, type ReportView } from './paging';
import { selectionFromClicks } from './overlay';
import {
  PEN_RADIUS_DEFAULT,
  type Stroke,
  clampPenRadius,
  hasLeafStroke,
  newStroke,
  serializeStrokes,
} from './strokes';
import type { LeafResponse, ReselectResponse, StrokeLabel } from './types';

export class AnnotationSession {
  strokes: Stroke[] = [];
  penRadius = PEN_RADIUS_DEFAULT;
  penLabel: StrokeLabel = 'leaf';
  leaf: LeafResponse | null = null;
  report: ReportView | null = null;
  lastReselect: ReselectResponse | null = null;
  lastError: string | null = null;
  reclickPrompt = false;
  busy = false;

  private activeStroke: Stroke | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly image: Blob,
  ) {}

  setPenRadius(radius: number): void {
    this.penRadius = clampPenRadius(radius);
  }

  setPenLabel(label: StrokeLabel): void {
    this.penLabel = label;
  }

  beginStroke(x: number, y: number): void {
    this.activeStroke = newStroke(this.penLabel, this.penRadius);
    this.activeStroke.points.push([x, y]);
  }

  extendStroke(x: number, y: number): void {
    this.activeStroke?.points.push([x, y]);
  }

  endStroke(): void {
    if (this.activeStroke && this.activeStroke.points.length > 0) {
      this.strokes.push(this.activeStroke);
    }
    this.activeStroke = null;
  }

  /** Submit is disabled without a leaf stroke. */
  get canSubmit(): boolean {
    return hasLeafStroke(this.strokes) && !this.busy;
  }

  get canDiagnose(): boolean {
    return this.leaf !== null && !this.busy;
  }

  async submitAnnotation(): Promise<LeafResponse | null> {
    if (!this.canSubmit) return null;
    this.busy = true;
    this.lastError = null;
    try {
      this.leaf = await this.api.submitLeaf(this.image, serializeStrokes(this.strokes));
      return this.leaf;
    } catch (e) {
      this.lastError = e instanceof Error ? e.message : String(e);
      return null;
    } finally {
      this.busy = false;
    }
  }

  async requestDiagnosis(): Promise<ReportView | null> {
    if (!this.canDiagnose || this.leaf === null) return null;
    this.busy = true;
    this.lastError = null;
    try {
      const wire = await this.api.diagnoseByLeafId(this.leaf.leaf_id);
      this.report = reportView(wire);
      return this.report;
    } catch (e) {
      this.lastError = e instanceof Error ? e.message : String(e);
      return null;
    } finally {
      this.busy = false;
    }
  }

  /** Two corner clicks select a region; degenerate clicks only raise the
   * re-click prompt and never hit the server. */
  async reselectRegion(
    clickA: [number, number],
    clickB: [number, number],
  ): Promise<ReselectResponse | null> {
    if (this.busy || this.leaf === null || this.report === null) return null;
    this.reclickPrompt = false;
    if (selectionFromClicks(clickA, clickB) === null) {
      this.reclickPrompt = true;
      return null;
    }
    this.busy = true;
    this.lastError = null;
    try {
      const resp = await this.api.reselect(this.leaf.leaf_id, clickA, clickB);
      this.lastReselect = resp;
      this.report = rerank(
        this.report,
        resp.ranked,
        this.report.entries
          .slice()
          .sort((a, b) => a.diseaseId - b.diseaseId)
          .map((e) => e.name),
      );
      return resp;
    } catch (e) {
      if (e instanceof ApiError && e.status === 422) {
        this.reclickPrompt = true; // server judged the rectangle degenerate
      } else {
        this.lastError = e instanceof Error ? e.message : String(e);
      }
      return null;
    } finally {
      this.busy = false;
    }
  }
}
