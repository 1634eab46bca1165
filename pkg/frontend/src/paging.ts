/** Ranked-report paging: three diseases visible at a time. */
import type { DiagnosisReportWire } from './types';

export const PAGE_SIZE = 3;

export interface RankedEntry {
  diseaseId: number;
  probability: number;
  name: string;
}

export interface ReportView {
  entries: RankedEntry[]; // full ranking, descending
  severity: number;
  noLesionsFound: boolean;
  anyLargeRegion: boolean;
  page: number;
  selected: number | null; // disease id of the opened details panel
}

export function reportView(report: DiagnosisReportWire): ReportView {
  return {
    entries: report.ranked.map(([id, p]) => ({
      diseaseId: id,
      probability: p,
      name: report.class_names[id],
    })),
    severity: report.severity,
    noLesionsFound: report.no_lesions_found,
    anyLargeRegion: report.any_large_region,
    page: 0,
    selected: null,
  };
}

export function pageCount(view: ReportView): number {
  return Math.max(1, Math.ceil(view.entries.length / PAGE_SIZE));
}

/** Entries visible on the current page: exactly min(3, remaining). */
export function visibleEntries(view: ReportView): RankedEntry[] {
  const start = view.page * PAGE_SIZE;
  return view.entries.slice(start, start + PAGE_SIZE);
}

export function nextPage(view: ReportView): ReportView {
  return { ...view, page: Math.min(view.page + 1, pageCount(view) - 1) };
}

export function prevPage(view: ReportView): ReportView {
  return { ...view, page: Math.max(view.page - 1, 0) };
}

export function selectEntry(view: ReportView, diseaseId: number): ReportView {
  return { ...view, selected: diseaseId };
}

/** Re-rank the displayed list from a reselect response (probability vector
 * order is by disease id; ranked pairs come sorted from the server). */
export function rerank(view: ReportView, ranked: [number, number][], names: string[]): ReportView {
  return {
    ...view,
    entries: ranked.map(([id, p]) => ({ diseaseId: id, probability: p, name: names[id] })),
    page: 0,
  };
}

export function formatSeverity(severity: number): string {
  return `${Math.round(severity * 100)}%`;
}

export function formatProbability(p: number): string {
  return `${(p * 100).toFixed(1)}%`;
}
