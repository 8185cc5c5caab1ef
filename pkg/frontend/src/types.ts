/**
 * Shapes of the annotation-service session API.
 *
 * Everything here mirrors what the service sends; the frontend never
 * computes parse state locally.
 */

export type Role = "N" | "S";

export type Action = "shift" | "reduce";

/** Attribute values as they appear in node JSON (cue is a string list). */
export type AttrValue = string | number | boolean | string[] | null;

export interface ArtrNodeJson {
  dre: string;
  role: Role | null;
  attributes: Record<string, AttrValue>;
  edu_ids: number[];
  children: ArtrNodeJson[];
}

export interface EduView {
  id: number;
  text: string;
  punctuation: string;
}

export interface EventJson {
  kind: string;
  left_dre: string;
  middle_dre: string;
  lookahead_dre: string;
  [key: string]: unknown;
}

export interface ViewState {
  id: string;
  text_id: string;
  status: "OPEN" | "FINALIZED" | "ABANDONED";
  edus: EduView[];
  stack: ArtrNodeJson[];
  lookahead: ArtrNodeJson | null;
  input_remaining: number;
  events: EventJson[];
  legal_actions: Action[];
  hint: Action | null;
}

export interface ActionsResponse {
  legal: Action[];
  hint: Action | null;
}

export interface CreateSessionRequest {
  text?: string;
  lines?: string[];
  text_id?: string;
}

export interface ShiftDecision {
  action: "shift";
}

export interface ReduceDecision {
  action: "reduce";
  head: string;
  left_role: Role;
  right_role: Role;
  rre: string;
  attributes: Record<string, AttrValue>;
}

export type Decision = ShiftDecision | ReduceDecision;

export interface FinalizeResponse {
  artr: unknown;
  log: unknown;
}

/** Error body sent by the service: machine-readable code plus message. */
export interface ErrorBody {
  code: string;
  message: string;
}
