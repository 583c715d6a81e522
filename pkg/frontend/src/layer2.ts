import type { ReminderEntry, SuspensionPayload } from "./types.js";

export interface ReminderSurface {
  taskId: string;
  pin: {
    thumbnail: string; // artifact id of the latest fragment
    narrative: string | null; // service text, verbatim
    fragmentCount: number;
  };
  popupNow: boolean;
  escalated: boolean; // trap risk: stronger styling, immediate pop-up
  countdownS: number | null; // seconds until the next scheduled reminder
  nextChannel: ReminderEntry["channel"] | null;
}

function nextReminder(schedule: ReminderEntry[], elapsedS: number): ReminderEntry | null {
  for (const entry of schedule) {
    if (entry.after_s > elapsedS) return entry;
  }
  return null;
}

// Layer 2: the reminder surface while a task sits suspended.  No
// suspended task means no pin at all.
export function buildReminder(status: SuspensionPayload | null): ReminderSurface | null {
  if (status === null) return null;
  const upcoming = nextReminder(status.reminders.schedule, status.elapsed_s);
  const due = status.reminders.schedule.some(
    (entry) => entry.channel === "popup" && entry.after_s <= status.elapsed_s,
  );
  return {
    taskId: status.task_id,
    pin: {
      thumbnail: `${status.task_id}#frag${Math.max(1, status.fragments_so_far)}`,
      narrative: status.narrative ? status.narrative.narrative : null,
      fragmentCount: status.fragments_so_far,
    },
    popupNow: status.trap || due,
    escalated: status.trap,
    countdownS: upcoming === null ? null : upcoming.after_s - status.elapsed_s,
    nextChannel: upcoming === null ? null : upcoming.channel,
  };
}
